#ifndef EQTREE_CHAIN_HPP
#define EQTREE_CHAIN_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eqtree/pairs.hpp"
#include "eqtree/partition.hpp"

namespace eqtree {

// One contraction: the two blocks merged, each sorted ascending, with
// min(left) < min(right).
struct MergeStep {
  std::vector<int> left;
  std::vector<int> right;

  bool operator==(const MergeStep& other) const = default;
};

// A maximal chain of flats of K_n, stored as its n-1 block merges.
// Step 0 acts on the all-singletons partition; after the last step a single
// block remains. Equivalently a ranked rooted binary tree on the taxa.
struct MergeChain {
  int n = 0;
  std::vector<MergeStep> merges;

  bool operator==(const MergeChain& other) const = default;
};

// Throws Error if the merge sequence is not a valid chain.
void validate_chain(const MergeChain& chain);

// Partitions along the chain: element 0 is all singletons, element n-1 the
// single block.
std::vector<Partition> chain_partitions(const MergeChain& chain);

// Canonical encoding: per step, (min of left block, min of right block).
// Blocks are identified by their minimum element, so this determines the
// chain; used for hashing and deduplication.
using ChainKey = std::vector<std::pair<int, int>>;

ChainKey chain_key(const MergeChain& chain);
std::string chain_key_string(const MergeChain& chain);

// Level sets L_k = F_k \ F_{k-1}: pair indices of the cross pairs joined at
// step k. Disjoint, and their union is all C(n,2) pairs.
std::vector<std::vector<std::uint32_t>> level_sets(const MergeChain& chain);

// Number of maximal chains: n! (n-1)! / 2^(n-1).
std::uint64_t chain_count(int n);

inline constexpr int kEnumerateChainsCap = 9;

// Streams every maximal chain exactly once, in the lexicographic order of
// merge choices (blocks ordered by minimum element at each step).
// Throws CapacityError for n > kEnumerateChainsCap.
void enumerate_chains(int n, const std::function<void(const MergeChain&)>& fn);

// Materialized variant, for n small enough to hold all chains.
std::vector<MergeChain> all_chains(int n);

// Rooted binary topology with the merge ranking forgotten. Canonical string:
// nested parentheses, children of every node sorted lexicographically.
std::string chain_topology(const MergeChain& chain,
                           const std::vector<std::string>& labels);
std::string chain_topology(const MergeChain& chain);  // labels "1".."n"

}  // namespace eqtree

#endif
