#include "eqtree/partition.hpp"

#include <algorithm>

namespace eqtree {

Partition canonical_partition(std::vector<std::vector<int>> blocks, int n) {
  std::vector<char> seen(n, 0);
  std::size_t covered = 0;
  for (auto& b : blocks) {
    if (b.empty()) throw MalformedPartitionError("empty block");
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    for (int e : b) {
      if (e < 0 || e >= n)
        throw MalformedPartitionError("element out of range");
      if (seen[e]) throw MalformedPartitionError("overlapping blocks");
      seen[e] = 1;
      ++covered;
    }
  }
  if (covered != static_cast<std::size_t>(n))
    throw MalformedPartitionError("blocks do not cover the ground set");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return Partition{n, std::move(blocks)};
}

}  // namespace eqtree
