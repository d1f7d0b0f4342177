#ifndef EQTREE_UPGMA_HPP
#define EQTREE_UPGMA_HPP

#include <vector>

#include "eqtree/pairs.hpp"
#include "eqtree/projection.hpp"

namespace eqtree {

// Full record of a UPGMA run. minave_per_step is nondecreasing and equals
// result.levels; both facts are what certify_upgma_projection checks.
struct UpgmaTrace {
  MergeChain chain;
  std::vector<double> minave_per_step;
  ProjectionOutcome result;
};

// Repeatedly merges the block pair with minimum average inter-block
// dissimilarity, averaging the original d entries over the cross pairs.
// Ties pick the pair whose (min of one block, min of the other, smaller
// first) key is lexicographically least. Throws DegenerateInputError for
// n < 2.
UpgmaTrace upgma(const DissimilarityMap& d);

// True iff the subspace projection onto the trace's chain reproduces the
// trace levels (<= 1e-12 scaled) and those levels are monotone. A false
// return indicates an implementation bug, never bad data.
bool certify_upgma_projection(const UpgmaTrace& trace,
                              const DissimilarityMap& d);

inline constexpr int kTieChainsCap = 6;

// Diagnostic: every chain reachable when ties may be broken arbitrarily.
// Exponential in the worst case, hence the small cap.
std::vector<MergeChain> upgma_tie_chains(const DissimilarityMap& d);

}  // namespace eqtree

#endif
