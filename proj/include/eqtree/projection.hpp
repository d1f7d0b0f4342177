#ifndef EQTREE_PROJECTION_HPP
#define EQTREE_PROJECTION_HPP

#include <cmath>
#include <type_traits>
#include <vector>

#include "eqtree/chain.hpp"
#include "eqtree/isotonic.hpp"
#include "eqtree/pairs.hpp"
#include "eqtree/rational.hpp"
#include "eqtree/tree.hpp"

namespace eqtree {

// Level sets of a chain flattened for the projection hot loops.
struct LevelStructure {
  int n = 0;
  std::vector<std::uint32_t> pair_idx;  // level sets back to back
  std::vector<std::uint32_t> offsets;   // size level_count()+1

  std::size_t level_count() const { return offsets.size() - 1; }
  std::size_t level_size(std::size_t k) const {
    return offsets[k + 1] - offsets[k];
  }
};

LevelStructure level_structure(const MergeChain& chain);

// Membership comparisons on doubles use an absolute tolerance after scaling
// the data to unit max-abs; exact mode compares rationals directly. Ties on
// cone boundaries are meaningful (shared facets), hence the pinned value.
inline constexpr double kConeTolerance = 1e-9;

double cone_tolerance(const std::vector<double>& values);
inline double cone_tolerance(const DissimilarityMap& d) {
  return cone_tolerance(d.values);
}

namespace detail {

template <typename S>
S sum_over(const std::vector<S>& d, const LevelStructure& ls, std::size_t k) {
  if constexpr (std::is_same_v<S, double>) {
    // Neumaier compensated sum.
    double s = 0.0, c = 0.0;
    for (std::uint32_t p = ls.offsets[k]; p < ls.offsets[k + 1]; ++p) {
      double v = d[ls.pair_idx[p]];
      double t = s + v;
      c += (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
      s = t;
    }
    return s + c;
  } else {
    S s = 0;
    for (std::uint32_t p = ls.offsets[k]; p < ls.offsets[k + 1]; ++p)
      s += d[ls.pair_idx[p]];
    return s;
  }
}

template <typename S>
std::vector<S> level_averages(const std::vector<S>& d,
                              const LevelStructure& ls) {
  std::vector<S> avg(ls.level_count());
  for (std::size_t k = 0; k < ls.level_count(); ++k)
    avg[k] = sum_over(d, ls, k) / S(static_cast<unsigned>(ls.level_size(k)));
  return avg;
}

template <typename S>
S residual_error(const std::vector<S>& d, const LevelStructure& ls,
                 const std::vector<S>& levels) {
  if constexpr (std::is_same_v<S, double>) {
    double s = 0.0, c = 0.0;
    for (std::size_t k = 0; k < ls.level_count(); ++k)
      for (std::uint32_t p = ls.offsets[k]; p < ls.offsets[k + 1]; ++p) {
        double r = d[ls.pair_idx[p]] - levels[k];
        double v = r * r;
        double t = s + v;
        c += (s >= v) ? (s - t) + v : (v - t) + s;
        s = t;
      }
    return s + c;
  } else {
    S s = 0;
    for (std::size_t k = 0; k < ls.level_count(); ++k)
      for (std::uint32_t p = ls.offsets[k]; p < ls.offsets[k + 1]; ++p) {
        S r = d[ls.pair_idx[p]] - levels[k];
        s += r * r;
      }
    return s;
  }
}

template <typename S>
bool monotone_levels(const std::vector<S>& levels, S tol, bool strict) {
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    if (strict ? !(levels[k + 1] - levels[k] > tol)
               : levels[k] - levels[k + 1] > tol)
      return false;
  }
  return true;
}

template <typename S>
std::vector<S> pooled_levels(const std::vector<S>& avg,
                             const LevelStructure& ls) {
  std::vector<S> weights(ls.level_count());
  for (std::size_t k = 0; k < ls.level_count(); ++k)
    weights[k] = S(static_cast<unsigned>(ls.level_size(k)));
  return isotonic_fit(avg, weights);
}

}  // namespace detail

// Result of projecting data onto a chain's subspace L_F or closed cone C_F.
// in_cone reports whether the subspace projection already lies in C_F,
// equivalently whether d is in the projection cone P_F.
struct ProjectionOutcome {
  MergeChain chain;
  std::vector<double> levels;
  bool in_cone = false;
  double squared_error = 0.0;
};

// v_k = mean of d over level set k: the orthogonal projection onto L_F.
ProjectionOutcome project_subspace(const DissimilarityMap& d,
                                   const MergeChain& chain);

// The n-2 monotone-average inequalities cutting out P_F.
bool in_projection_cone(const DissimilarityMap& d, const MergeChain& chain,
                        bool strict = false);

// Nearest point of the closed cone C_F: weighted isotonic regression of the
// level averages with weights |L_k|. Coincides with project_subspace when the
// averages are already monotone.
ProjectionOutcome project_cone(const DissimilarityMap& d,
                               const MergeChain& chain);

double squared_error(const DissimilarityMap& d, const Ultrametric& x);

namespace exact {

struct ProjectionOutcome {
  MergeChain chain;
  std::vector<Rational> levels;
  bool in_cone = false;
  Rational squared_error;
};

ProjectionOutcome project_subspace(const std::vector<Rational>& values,
                                   const MergeChain& chain);
ProjectionOutcome project_cone(const std::vector<Rational>& values,
                               const MergeChain& chain);

}  // namespace exact

}  // namespace eqtree

#endif
