#include "eqtree/pairs.hpp"

#include <set>

namespace eqtree {

TaxonSet default_taxa(int n) {
  TaxonSet t;
  t.labels.reserve(n);
  for (int i = 0; i < n; ++i) t.labels.push_back(std::to_string(i + 1));
  return t;
}

std::pair<int, int> pair_from_index(std::size_t k, int n) {
  // Walk the rows; n is small enough everywhere this is called.
  std::size_t row_len = static_cast<std::size_t>(n) - 1;
  int i = 0;
  while (k >= row_len) {
    k -= row_len;
    --row_len;
    ++i;
  }
  return {i, i + 1 + static_cast<int>(k)};
}

DissimilarityMap make_dissimilarity(TaxonSet taxa, std::vector<double> values) {
  if (taxa.size() < 2) throw DegenerateInputError("need at least 2 taxa");
  if (values.size() != pair_count(taxa.size()))
    throw DimensionError("value vector length does not match C(n,2)");
  std::set<std::string> seen(taxa.labels.begin(), taxa.labels.end());
  if (seen.size() != taxa.labels.size())
    throw Error("duplicate taxon labels");
  for (const auto& l : taxa.labels)
    if (l.empty()) throw Error("empty taxon label");
  return DissimilarityMap{std::move(taxa), std::move(values)};
}

}  // namespace eqtree
