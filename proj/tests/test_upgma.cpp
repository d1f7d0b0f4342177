#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "doctest.h"
#include "eqtree/search.hpp"
#include "eqtree/upgma.hpp"

using namespace eqtree;

namespace {

DissimilarityMap example_data(double eps) {
  return make_dissimilarity(default_taxa(4), {1, 2, 20, 10, 28 + eps, 5});
}

double runif(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(g() >> 11) * 0x1.0p-53;
}

DissimilarityMap random_d(std::mt19937_64& g, int n) {
  std::vector<double> v(pair_count(n));
  for (double& x : v) x = runif(g, 0.5, 10.0);
  return make_dissimilarity(default_taxa(n), std::move(v));
}

}  // namespace

TEST_CASE("worked 4-taxon example picks the fork") {
  auto trace = upgma(example_data(0));
  CHECK(chain_key_string(trace.chain) == "0-1,2-3,0-2");
  REQUIRE(trace.minave_per_step.size() == 3);
  CHECK(trace.minave_per_step[0] == doctest::Approx(1.0));
  CHECK(trace.minave_per_step[1] == doctest::Approx(5.0));
  CHECK(trace.minave_per_step[2] == doctest::Approx(15.0));
  CHECK(trace.result.in_cone);
  CHECK(trace.result.squared_error == doctest::Approx(388.0).epsilon(1e-12));
}

TEST_CASE("two-taxon base case and degenerate input") {
  auto d = make_dissimilarity(default_taxa(2), {5.0});
  auto trace = upgma(d);
  CHECK(trace.minave_per_step == std::vector<double>{5.0});
  CHECK(trace.result.squared_error == doctest::Approx(0.0));
  TaxonSet one;
  one.labels = {"a"};
  CHECK_THROWS_AS(upgma(DissimilarityMap{one, {}}), DegenerateInputError);
}

TEST_CASE("cross-block averages use the original entries") {
  // After merging {0,1}, the average to {2} must be (d02 + d12) / 2 of the
  // original entries, not an average of previously collapsed values.
  auto d = make_dissimilarity(default_taxa(4), {1, 2, 9, 8, 9, 9});
  auto trace = upgma(d);
  CHECK(chain_key_string(trace.chain) == "0-1,0-2,0-3");
  CHECK(trace.minave_per_step[1] == doctest::Approx((2.0 + 8.0) / 2));
  CHECK(trace.minave_per_step[2] == doctest::Approx((9 + 9 + 9) / 3.0));
}

TEST_CASE("minave sequence is always monotone and certified") {
  std::mt19937_64 g(41);
  for (int it = 0; it < 300; ++it) {
    int n = 2 + static_cast<int>(g() % 7);
    auto d = random_d(g, n);
    auto trace = upgma(d);
    for (std::size_t k = 0; k + 1 < trace.minave_per_step.size(); ++k)
      CHECK(trace.minave_per_step[k] <= trace.minave_per_step[k + 1] + 1e-12);
    CHECK(trace.result.in_cone);
    CHECK(certify_upgma_projection(trace, d));
    CHECK(in_projection_cone(d, trace.chain));
  }
}

TEST_CASE("ties break toward the lexicographically least block pair") {
  auto d = make_dissimilarity(default_taxa(4), std::vector<double>(6, 2.0));
  auto trace = upgma(d);
  CHECK(chain_key_string(trace.chain) == "0-1,0-2,0-3");
}

TEST_CASE("tie enumeration") {
  auto flat = make_dissimilarity(default_taxa(3), {1.0, 1.0, 1.0});
  CHECK(upgma_tie_chains(flat).size() == 3);
  auto generic = make_dissimilarity(default_taxa(3), {1.0, 2.0, 4.0});
  auto chains = upgma_tie_chains(generic);
  REQUIRE(chains.size() == 1);
  CHECK(chain_key(chains[0]) == chain_key(upgma(generic).chain));
  // The deterministic winner is always among the tie set.
  auto half = make_dissimilarity(default_taxa(4), {1, 3, 3, 3, 3, 1});
  auto set = upgma_tie_chains(half);
  std::set<ChainKey> keys;
  for (const auto& c : set) keys.insert(chain_key(c));
  CHECK(keys.size() == set.size());
  CHECK(keys.count(chain_key(upgma(half).chain)) == 1);
}

TEST_CASE("three-taxon UPGMA is exactly optimal") {
  // Degree-3 instances: the first merge is on the minimum entry, and the
  // projection is optimal among all three chains.
  std::mt19937_64 g(59);
  for (int it = 0; it < 2000; ++it) {
    auto d = random_d(g, 3);
    auto trace = upgma(d);
    auto best = brute_force_optimum(d);
    CHECK(trace.result.squared_error <=
          best.squared_error + 1e-10 * (1 + best.squared_error));
  }
}
