#ifndef EQTREE_SEARCH_HPP
#define EQTREE_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "eqtree/pairs.hpp"
#include "eqtree/projection.hpp"

namespace eqtree {

// All maximal chains that differ from the input in the partition at exactly
// one interior rank. Covers both the ranking swap (four distinct blocks) and
// the topology change (three blocks). Never contains the input; no
// duplicates.
std::vector<MergeChain> chain_neighbors(const MergeChain& chain);

// G_{n,d}: chains whose projection cone contains d, adjacent when they
// differ in one flat.
struct ConeGraph {
  std::vector<MergeChain> vertices;
  std::vector<std::pair<int, int>> edges;  // index pairs, i < j
  std::vector<int> component;              // label per vertex
  int component_count = 0;
};

inline constexpr int kConeGraphCap = 7;

ConeGraph cone_graph(const DissimilarityMap& d);

struct ExtendedUpgmaResult {
  ProjectionOutcome best;
  std::size_t visited_count = 0;
};

// Breadth-first search of the cone-graph component containing the UPGMA
// chain; returns the best subspace projection among visited chains. Its
// error never exceeds the UPGMA error.
ExtendedUpgmaResult extended_upgma(const DissimilarityMap& d);

struct SearchStats {
  std::size_t dp_edges = 0;    // edge labels kept
  std::size_t dp_pruned = 0;   // edges with no feasible predecessor
};

inline constexpr int kExactSearchCap = 12;

// Exact least-squares equidistant tree: rank-by-rank sweep of the Hasse
// diagram of the partition lattice. Each edge's level average must dominate
// some feasible incoming edge; infeasible edges are pruned. The optimum is
// reconstructed through per-edge backpointers, which enforces monotonicity
// along the whole path (an unconstrained shortest path on the pruned graph
// would not).
ProjectionOutcome exact_search(const DissimilarityMap& d,
                               SearchStats* stats = nullptr);

inline constexpr int kBruteForceCap = 7;

// Independent oracle: minimum of project_cone over every maximal chain.
ProjectionOutcome brute_force_optimum(const DissimilarityMap& d);

namespace exact {

ProjectionOutcome exact_search(const std::vector<Rational>& values, int n,
                               SearchStats* stats = nullptr);
ProjectionOutcome brute_force_optimum(const std::vector<Rational>& values,
                                      int n);

}  // namespace exact

}  // namespace eqtree

#endif
