#ifndef EQTREE_PARTITION_HPP
#define EQTREE_PARTITION_HPP

#include <vector>

#include "eqtree/errors.hpp"

namespace eqtree {

// Set partition of {0..n-1} in canonical form: each block sorted ascending,
// blocks ordered by their minimum element.
struct Partition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  bool operator==(const Partition& other) const = default;
};

// Validates (disjoint, covering, nonempty blocks) and canonicalizes.
// Idempotent on already-canonical input.
Partition canonical_partition(std::vector<std::vector<int>> blocks, int n);

}  // namespace eqtree

#endif
