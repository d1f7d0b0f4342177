#ifndef EQTREE_FAN_HPP
#define EQTREE_FAN_HPP

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "eqtree/pairs.hpp"
#include "eqtree/search.hpp"

namespace eqtree {

// P_d: the projection cones containing a data point, with the corresponding
// tree topologies.
struct ConeSet {
  DissimilarityMap data;
  std::set<std::string> chains;      // canonical chain encodings
  std::set<std::string> topologies;  // image under chain_topology
};

inline constexpr int kConeSetCap = 7;

ConeSet projection_cone_set(const DissimilarityMap& d, bool strict = false);

// Witness for the (n-1)! lower bound: d(1,j) = a for all j, d(i,j) = b
// otherwise. Lies in the interior of the projection cone of every comb
// rooted at taxon 1. Requires a < b.
DissimilarityMap comb_witness(int n, double a, double b);

// Census of the maximal cells of the common refinement of the 18 projection
// cones at n = 4, at topology granularity (a fork tree owns two chains).
//
// Three passes, all certificate-backed (every reported cell has an explicit
// data vector whose cone set was evaluated from scratch):
//   1. `samples` points uniform on the unit sphere of the quotient modulo
//      the all-ones line; samples within tolerance of a boundary are
//      discarded.
//   2. a fixed number of structured probes near low-dimensional strata of
//      the arrangement (random hyperplane intersections, perturbed by a
//      small epsilon). Uniform sampling alone misses the thinnest cells at
//      any realistic sample count.
//   3. closure under taxon relabeling: the S4 image of a witness is itself
//      a witness and gets re-evaluated.
// Deterministic given (samples, seed); independent of thread count.
struct CensusReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t discarded_boundary = 0;
  int max_cardinality = 0;
  // Uniform pass, by cone-set cardinality.
  std::map<int, std::uint64_t> sample_hits_by_cardinality;
  std::map<int, std::uint64_t> distinct_sets_by_cardinality;
  std::uint64_t distinct_six_sets_uniform = 0;
  // After the structured pass and relabeling closure.
  std::uint64_t distinct_six_sets = 0;
  std::uint64_t distinct_six_sets_chain_granular = 0;  // informational
  std::array<bool, 10> orbit_representative_hit{};
  // The distinct six-element topology sets, each sorted, as witness that the
  // census is certificate backed.
  std::vector<std::vector<std::string>> six_sets;
};

CensusReport q4_census(std::uint64_t samples, std::uint64_t seed,
                       int threads = 0);

// The ten orbit representatives of the six-cone cells, as topology sets.
const std::array<std::vector<std::string>, 10>& q4_orbit_representatives();

// Empirical probe of the (n-1)! upper-bound conjecture: random and
// structured sampling, reporting the maximum strict cone-set cardinality
// seen. Evidence only; asserts nothing.
struct ConjectureProbeReport {
  int n = 0;
  std::uint64_t samples = 0;
  int max_strict_cardinality = 0;
  std::vector<double> attaining_vector;
};

inline constexpr int kConjectureProbeCap = 6;

ConjectureProbeReport conjecture_probe(int n, std::uint64_t samples,
                                       std::uint64_t seed);

}  // namespace eqtree

#endif
