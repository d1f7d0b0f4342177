#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "eqtree/projection.hpp"

using namespace eqtree;

namespace {

// Data order (d12, d13, d14, d23, d24, d34).
DissimilarityMap d4(double d12, double d13, double d14, double d23, double d24,
                    double d34) {
  return make_dissimilarity(default_taxa(4), {d12, d13, d14, d23, d24, d34});
}

DissimilarityMap example_data(double eps) {
  return d4(1, 2, 20, 10, 28 + eps, 5);
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

TEST_CASE("fork projection of the worked 4-taxon example") {
  auto out = project_subspace(example_data(0), fork4());
  REQUIRE(out.levels.size() == 3);
  CHECK(out.levels[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.levels[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(out.levels[2] == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(out.in_cone);
  CHECK(out.squared_error == doctest::Approx(388.0).epsilon(1e-12));
}

TEST_CASE("comb projection of the worked 4-taxon example") {
  auto out = project_subspace(example_data(0), comb4());
  CHECK(out.levels[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.levels[1] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(out.levels[2] == doctest::Approx(53.0 / 3).epsilon(1e-12));
  CHECK(out.in_cone);
  CHECK(out.squared_error == doctest::Approx(914.0 / 3).epsilon(1e-9));
}

TEST_CASE("projection fixes points of the subspace") {
  Ultrametric x{comb4(), {1.0, 4.0, 9.0}};
  auto d = make_dissimilarity(default_taxa(4), expand_ultrametric(x));
  auto out = project_subspace(d, comb4());
  CHECK(out.squared_error == doctest::Approx(0.0));
  for (int k = 0; k < 3; ++k)
    CHECK(out.levels[k] == doctest::Approx(x.levels[k]).epsilon(1e-14));
  // Idempotence on a generic input.
  std::mt19937_64 g(11);
  auto d2 = random_d(g, 4);
  auto first = project_subspace(d2, fork4());
  auto again = project_subspace(
      make_dissimilarity(default_taxa(4),
                         expand_ultrametric({fork4(), first.levels})),
      fork4());
  for (int k = 0; k < 3; ++k)
    CHECK(again.levels[k] == doctest::Approx(first.levels[k]).epsilon(1e-13));
}

TEST_CASE("cone membership on the 4-cone instance") {
  auto d = d4(1, 2, 3, 2, 7, 3);
  // Averages along the comb 0-1,0-2,0-3: 1, 2, 13/3.
  CHECK(in_projection_cone(d, comb4()));
  CHECK(in_projection_cone(d, comb4(), /*strict=*/true));
}

TEST_CASE("membership when the first merge is the 3-4 cherry") {
  // Averages 5, 11, ... : first inequality needs 5 <= (2+10)/2 = 6.
  MergeChain c;
  c.n = 4;
  c.merges = {MergeStep{{2}, {3}}, MergeStep{{0}, {2, 3}},
              MergeStep{{0, 2, 3}, {1}}};
  auto d = example_data(0);
  auto out = project_subspace(d, c);
  CHECK(out.levels[0] == doctest::Approx(5.0));
  CHECK(out.levels[1] == doctest::Approx(11.0));
  CHECK(in_projection_cone(d, c) == out.in_cone);
}

TEST_CASE("constant data sits in every cone, never strictly") {
  auto d = make_dissimilarity(default_taxa(4),
                              std::vector<double>(6, 3.0));
  enumerate_chains(4, [&](const MergeChain& c) {
    CHECK(in_projection_cone(d, c));
    CHECK(!in_projection_cone(d, c, /*strict=*/true));
  });
}

TEST_CASE("closed-cone projection pools violating levels") {
  auto d = make_dissimilarity(default_taxa(3), {4.0, 1.0, 1.0});
  MergeChain c;
  c.n = 3;
  c.merges = {MergeStep{{0}, {1}}, MergeStep{{0, 1}, {2}}};
  auto sub = project_subspace(d, c);
  CHECK(sub.levels[0] == doctest::Approx(4.0));
  CHECK(sub.levels[1] == doctest::Approx(1.0));
  CHECK(!sub.in_cone);
  auto cone = project_cone(d, c);
  CHECK(cone.levels[0] == doctest::Approx(2.0));
  CHECK(cone.levels[1] == doctest::Approx(2.0));
  CHECK(cone.squared_error == doctest::Approx(6.0));
}

TEST_CASE("cone projection never beats subspace projection") {
  std::mt19937_64 g(5);
  for (int it = 0; it < 200; ++it) {
    int n = 3 + static_cast<int>(g() % 5);
    auto d = random_d(g, n);
    enumerate_chains(n, [&](const MergeChain& c) {
      auto sub = project_subspace(d, c);
      auto cone = project_cone(d, c);
      CHECK(cone.squared_error >=
            sub.squared_error - 1e-9 * (1 + sub.squared_error));
      for (std::size_t k = 0; k + 1 < cone.levels.size(); ++k)
        CHECK(cone.levels[k] <= cone.levels[k + 1] + 1e-12);
      if (sub.in_cone)
        CHECK(cone.squared_error ==
              doctest::Approx(sub.squared_error).epsilon(1e-12));
    });
    if (n > 5) break;  // keep the loop cheap
  }
}

TEST_CASE("residual is orthogonal to the level indicators") {
  std::mt19937_64 g(17);
  for (int it = 0; it < 50; ++it) {
    int n = 3 + static_cast<int>(g() % 5);
    auto d = random_d(g, n);
    enumerate_chains(n, [&](const MergeChain& c) {
      auto out = project_subspace(d, c);
      auto x = expand_ultrametric({c, out.levels});
      auto ls = level_sets(c);
      for (const auto& level : ls) {
        double inner = 0.0;
        for (std::uint32_t p : level) inner += d.values[p] - x[p];
        CHECK(std::abs(inner) <= 1e-10);
      }
      // Pythagoras: ||d||^2 = ||x||^2 + ||d - x||^2.
      double nd = 0, nx = 0, nr = 0;
      for (std::size_t p = 0; p < x.size(); ++p) {
        nd += d.values[p] * d.values[p];
        nx += x[p] * x[p];
        nr += (d.values[p] - x[p]) * (d.values[p] - x[p]);
      }
      CHECK(nd == doctest::Approx(nx + nr).epsilon(1e-9));
      CHECK(out.squared_error == doctest::Approx(nr).epsilon(1e-9));
    });
  }
}

TEST_CASE("squared_error of an ultrametric") {
  Ultrametric x{fork4(), {1.0, 5.0, 15.0}};
  CHECK(squared_error(example_data(0), x) ==
        doctest::Approx(388.0).epsilon(1e-12));
  // Against the eps=0 tree: residuals 0, -13, 5, -5, 14, 0.
  CHECK(squared_error(example_data(1), x) ==
        doctest::Approx(415.0).epsilon(1e-12));
  // Against the tree refit to the eps=1 data (top level 61/4).
  Ultrametric refit{fork4(), {1.0, 5.0, 15.25}};
  CHECK(squared_error(example_data(1), refit) ==
        doctest::Approx(414.75).epsilon(1e-12));
  auto d = make_dissimilarity(default_taxa(4), expand_ultrametric(x));
  CHECK(squared_error(d, x) == doctest::Approx(0.0));
}

TEST_CASE("size mismatches raise dimension errors") {
  auto d = make_dissimilarity(default_taxa(3), {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(project_subspace(d, comb4()), DimensionError);
  CHECK_THROWS_AS(in_projection_cone(d, comb4()), DimensionError);
  CHECK_THROWS_AS(project_cone(d, comb4()), DimensionError);
}

TEST_CASE("exact projections agree with floating point") {
  auto d = example_data(0);
  auto rv = rational_values(d.values);
  auto out = exact::project_subspace(rv, comb4());
  CHECK(out.squared_error == Rational(914, 3));
  CHECK(out.levels[1] == Rational(6));
  CHECK(out.levels[2] == Rational(53, 3));
  CHECK(out.in_cone);
  auto pooled = exact::project_cone(rational_values({4.0, 1.0, 1.0}),
                                    MergeChain{3,
                                               {MergeStep{{0}, {1}},
                                                MergeStep{{0, 1}, {2}}}});
  CHECK(pooled.levels[0] == Rational(2));
  CHECK(pooled.squared_error == Rational(6));
  // Random agreement check.
  std::mt19937_64 g(23);
  for (int it = 0; it < 20; ++it) {
    auto rd = random_d(g, 5);
    auto rrv = rational_values(rd.values);
    enumerate_chains(5, [&](const MergeChain& c) {
      auto fe = project_cone(rd, c);
      auto re = exact::project_cone(rrv, c);
      CHECK(fe.squared_error ==
            doctest::Approx(static_cast<double>(re.squared_error))
                .epsilon(1e-12));
    });
  }
}
