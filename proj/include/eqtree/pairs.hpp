#ifndef EQTREE_PAIRS_HPP
#define EQTREE_PAIRS_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "eqtree/errors.hpp"

namespace eqtree {

// Taxa are indexed 0..n-1 internally; labels are the user-facing names.
struct TaxonSet {
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(labels.size()); }
};

// Labels "1".."n".
TaxonSet default_taxa(int n);

inline std::size_t pair_count(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

// Row-major order over pairs (i,j), i<j:
// (0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1).
inline std::size_t pair_index(int i, int j, int n) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

std::pair<int, int> pair_from_index(std::size_t k, int n);

// Dissimilarity data over unordered taxon pairs, stored in pair_index order.
// Entries may be negative; nothing downstream requires nonnegativity.
struct DissimilarityMap {
  TaxonSet taxa;
  std::vector<double> values;

  int n() const { return taxa.size(); }

  double at(int i, int j) const {
    if (i > j) std::swap(i, j);
    return values[pair_index(i, j, n())];
  }
};

DissimilarityMap make_dissimilarity(TaxonSet taxa, std::vector<double> values);

}  // namespace eqtree

#endif
