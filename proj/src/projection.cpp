#include "eqtree/projection.hpp"

#include <algorithm>
#include <cmath>

namespace eqtree {

LevelStructure level_structure(const MergeChain& chain) {
  LevelStructure ls;
  ls.n = chain.n;
  ls.offsets.push_back(0);
  for (const auto& level : level_sets(chain)) {
    ls.pair_idx.insert(ls.pair_idx.end(), level.begin(), level.end());
    ls.offsets.push_back(static_cast<std::uint32_t>(ls.pair_idx.size()));
  }
  return ls;
}

double cone_tolerance(const std::vector<double>& values) {
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return kConeTolerance * scale;
}

namespace {

void check_sizes(const DissimilarityMap& d, const MergeChain& chain) {
  if (d.n() != chain.n)
    throw DimensionError("data and chain taxon counts differ");
}

}  // namespace

ProjectionOutcome project_subspace(const DissimilarityMap& d,
                                   const MergeChain& chain) {
  check_sizes(d, chain);
  auto ls = level_structure(chain);
  ProjectionOutcome out;
  out.chain = chain;
  out.levels = detail::level_averages(d.values, ls);
  out.in_cone = detail::monotone_levels(out.levels, cone_tolerance(d.values),
                                        /*strict=*/false);
  out.squared_error = detail::residual_error(d.values, ls, out.levels);
  return out;
}

bool in_projection_cone(const DissimilarityMap& d, const MergeChain& chain,
                        bool strict) {
  check_sizes(d, chain);
  auto ls = level_structure(chain);
  auto avg = detail::level_averages(d.values, ls);
  return detail::monotone_levels(avg, cone_tolerance(d.values), strict);
}

ProjectionOutcome project_cone(const DissimilarityMap& d,
                               const MergeChain& chain) {
  check_sizes(d, chain);
  auto ls = level_structure(chain);
  auto avg = detail::level_averages(d.values, ls);
  ProjectionOutcome out;
  out.chain = chain;
  out.in_cone = detail::monotone_levels(avg, cone_tolerance(d.values),
                                        /*strict=*/false);
  out.levels = detail::pooled_levels(avg, ls);
  out.squared_error = detail::residual_error(d.values, ls, out.levels);
  return out;
}

double squared_error(const DissimilarityMap& d, const Ultrametric& x) {
  if (d.n() != x.chain.n)
    throw DimensionError("data and ultrametric taxon counts differ");
  auto ls = level_structure(x.chain);
  return detail::residual_error(d.values, ls, x.levels);
}

namespace exact {

ProjectionOutcome project_subspace(const std::vector<Rational>& values,
                                   const MergeChain& chain) {
  if (values.size() != pair_count(chain.n))
    throw DimensionError("value vector length does not match chain");
  auto ls = level_structure(chain);
  ProjectionOutcome out;
  out.chain = chain;
  out.levels = detail::level_averages(values, ls);
  out.in_cone =
      detail::monotone_levels(out.levels, Rational(0), /*strict=*/false);
  out.squared_error = detail::residual_error(values, ls, out.levels);
  return out;
}

ProjectionOutcome project_cone(const std::vector<Rational>& values,
                               const MergeChain& chain) {
  if (values.size() != pair_count(chain.n))
    throw DimensionError("value vector length does not match chain");
  auto ls = level_structure(chain);
  auto avg = detail::level_averages(values, ls);
  ProjectionOutcome out;
  out.chain = chain;
  out.in_cone = detail::monotone_levels(avg, Rational(0), /*strict=*/false);
  out.levels = detail::pooled_levels(avg, ls);
  out.squared_error = detail::residual_error(values, ls, out.levels);
  return out;
}

}  // namespace exact

}  // namespace eqtree
