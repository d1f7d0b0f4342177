#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
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

MergeChain comb4() {
  MergeChain c;
  c.n = 4;
  c.merges = {MergeStep{{0}, {1}}, MergeStep{{0, 1}, {2}},
              MergeStep{{0, 1, 2}, {3}}};
  return c;
}

MergeChain fork4() {
  MergeChain c;
  c.n = 4;
  c.merges = {MergeStep{{0}, {1}}, MergeStep{{2}, {3}},
              MergeStep{{0, 1}, {2, 3}}};
  return c;
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

TEST_CASE("fork neighbors are the two rerootings and the ranking swap") {
  auto nbs = chain_neighbors(fork4());
  std::set<std::string> keys;
  for (const auto& c : nbs) {
    CHECK_NOTHROW(validate_chain(c));
    keys.insert(chain_key_string(c));
  }
  CHECK(keys == std::set<std::string>{"0-1,0-2,0-3", "0-1,0-3,0-2",
                                      "2-3,0-1,0-2"});
}

TEST_CASE("comb neighbors") {
  auto nbs = chain_neighbors(comb4());
  std::set<std::string> keys;
  for (const auto& c : nbs) keys.insert(chain_key_string(c));
  // Rank 1 alternatives replace the first cherry inside {0,1,2}; rank 2
  // alternatives change which block joins {0,1} (one of them is the fork).
  CHECK(keys == std::set<std::string>{"0-2,0-1,0-3", "1-2,0-1,0-3",
                                      "0-1,0-3,0-2", "0-1,2-3,0-2"});
}

TEST_CASE("neighborhood relation is symmetric and never reflexive") {
  for (const auto& c : all_chains(5)) {
    auto key = chain_key(c);
    for (const auto& nb : chain_neighbors(c)) {
      CHECK(chain_key(nb) != key);
      auto back = chain_neighbors(nb);
      bool found = std::any_of(back.begin(), back.end(),
                               [&](const MergeChain& b) {
                                 return chain_key(b) == key;
                               });
      CHECK(found);
    }
  }
}

TEST_CASE("cone graph of the 4-cone instance has components 2,1,1") {
  auto d = make_dissimilarity(default_taxa(4), {1, 2, 3, 2, 7, 3});
  auto g = cone_graph(d);
  REQUIRE(g.vertices.size() == 4);
  CHECK(g.component_count == 3);
  std::vector<int> sizes(g.component_count, 0);
  for (int c : g.component) ++sizes[c];
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<int>{1, 1, 2});
  // The UPGMA chain sits in the two-element component.
  auto upkey = chain_key(upgma(d).chain);
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (chain_key(g.vertices[v]) == upkey) {
      int cnt = 0;
      for (int c : g.component)
        if (c == g.component[v]) ++cnt;
      CHECK(cnt == 2);
    }
  std::mt19937_64 rg(1);
  CHECK_THROWS_AS(cone_graph(random_d(rg, 8)), CapacityError);
}

TEST_CASE("extended search on the worked example visits five cones") {
  auto res = extended_upgma(example_data(0));
  CHECK(res.visited_count == 5);
  CHECK(res.best.squared_error == doctest::Approx(914.0 / 3).epsilon(1e-12));
  CHECK(chain_key_string(res.best.chain) == "0-1,0-2,0-3");
}

TEST_CASE("extended search on the 4-cone instance stays in its component") {
  auto d = make_dissimilarity(default_taxa(4), {1, 2, 3, 2, 7, 3});
  auto res = extended_upgma(d);
  CHECK(res.visited_count == 2);
}

TEST_CASE("extended never loses to plain UPGMA") {
  std::mt19937_64 g(67);
  for (int it = 0; it < 200; ++it) {
    int n = 3 + static_cast<int>(g() % 5);
    auto d = random_d(g, n);
    auto up = upgma(d);
    auto ext = extended_upgma(d);
    CHECK(ext.best.squared_error <= up.result.squared_error + 1e-12);
    CHECK(ext.visited_count >= 1);
  }
}

TEST_CASE("exact search equals brute force on random instances") {
  std::mt19937_64 g(71);
  for (int n = 4; n <= 6; ++n)
    for (int it = 0; it < 50; ++it) {
      auto d = random_d(g, n);
      SearchStats stats;
      auto opt = exact_search(d, &stats);
      auto ref = brute_force_optimum(d);
      CHECK(opt.squared_error ==
            doctest::Approx(ref.squared_error).epsilon(1e-9));
      CHECK(opt.in_cone);
      CHECK(stats.dp_edges > 0);
    }
}

TEST_CASE("exact search equals brute force in rational arithmetic") {
  std::mt19937_64 g(73);
  for (int it = 0; it < 20; ++it) {
    auto d = random_d(g, 5);
    auto rv = rational_values(d.values);
    auto opt = exact::exact_search(rv, 5);
    auto ref = exact::brute_force_optimum(rv, 5);
    CHECK(opt.squared_error == ref.squared_error);
    CHECK(opt.in_cone);
    CHECK(chain_key(opt.chain) == chain_key(ref.chain));
  }
}

TEST_CASE("worked example optimum is the comb at 914/3") {
  auto rv = rational_values(example_data(0).values);
  auto opt = exact::exact_search(rv, 4);
  CHECK(opt.squared_error == Rational(914, 3));
  CHECK(exact::brute_force_optimum(rv, 4).squared_error == Rational(914, 3));
}

TEST_CASE("solver ordering: exact <= extended <= upgma") {
  std::mt19937_64 g(79);
  for (int it = 0; it < 100; ++it) {
    auto d = random_d(g, 6);
    double e_up = upgma(d).result.squared_error;
    double e_ext = extended_upgma(d).best.squared_error;
    double e_opt = exact_search(d).squared_error;
    CHECK(e_opt <= e_ext + 1e-9 * (1 + e_ext));
    CHECK(e_ext <= e_up + 1e-12);
  }
}

TEST_CASE("capacity limits") {
  std::mt19937_64 g(83);
  auto big = random_d(g, 13);
  CHECK_THROWS_AS(exact_search(big), CapacityError);
  auto mid = random_d(g, 8);
  CHECK_THROWS_AS(brute_force_optimum(mid), CapacityError);
}

TEST_CASE("already-ultrametric input comes back exactly") {
  Ultrametric x{fork4(), {2.0, 3.0, 8.0}};
  auto d = make_dissimilarity(default_taxa(4), expand_ultrametric(x));
  auto opt = exact_search(d);
  CHECK(opt.squared_error == doctest::Approx(0.0));
  CHECK(chain_topology(opt.chain) == chain_topology(fork4()));
}
