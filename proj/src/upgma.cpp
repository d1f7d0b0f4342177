#include "eqtree/upgma.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace eqtree {

namespace {

struct Agglomerator {
  // Blocks ordered by minimum element; sums[i][j] = sum of original d over
  // the cross pairs of blocks i and j.
  std::vector<std::vector<int>> blocks;
  std::vector<std::vector<double>> sums;

  explicit Agglomerator(const DissimilarityMap& d) {
    int n = d.n();
    blocks.resize(n);
    sums.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) blocks[i] = {i};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sums[i][j] = sums[j][i] = d.at(i, j);
  }

  double count(std::size_t i, std::size_t j) const {
    return static_cast<double>(blocks[i].size()) *
           static_cast<double>(blocks[j].size());
  }

  // avg(i,j) < avg(k,l) by cross multiplication; counts are exact small
  // integers, so ties are detected without division noise.
  bool less(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return sums[i][j] * count(k, l) < sums[k][l] * count(i, j);
  }
  bool equal(std::size_t i, std::size_t j, std::size_t k,
             std::size_t l) const {
    return sums[i][j] * count(k, l) == sums[k][l] * count(i, j);
  }

  MergeStep merge(std::size_t i, std::size_t j) {
    MergeStep step{blocks[i], blocks[j]};
    std::vector<int> merged;
    std::merge(blocks[i].begin(), blocks[i].end(), blocks[j].begin(),
               blocks[j].end(), std::back_inserter(merged));
    blocks[i] = std::move(merged);
    for (std::size_t u = 0; u < blocks.size(); ++u)
      if (u != i && u != j) {
        sums[i][u] += sums[j][u];
        sums[u][i] = sums[i][u];
      }
    blocks.erase(blocks.begin() + j);
    sums.erase(sums.begin() + j);
    for (auto& row : sums) row.erase(row.begin() + j);
    return step;
  }
};

}  // namespace

UpgmaTrace upgma(const DissimilarityMap& d) {
  int n = d.n();
  if (n < 2) throw DegenerateInputError("UPGMA needs n >= 2");
  Agglomerator agg(d);
  UpgmaTrace trace;
  trace.chain.n = n;
  while (agg.blocks.size() > 1) {
    std::size_t bi = 0, bj = 1;
    std::size_t m = agg.blocks.size();
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        // Blocks are ordered by min element, so scanning (i,j) in order makes
        // the first minimum the canonical tie winner.
        if (agg.less(i, j, bi, bj)) {
          bi = i;
          bj = j;
        }
      }
    trace.minave_per_step.push_back(agg.sums[bi][bj] / agg.count(bi, bj));
    trace.chain.merges.push_back(agg.merge(bi, bj));
  }
  auto ls = level_structure(trace.chain);
  trace.result.chain = trace.chain;
  trace.result.levels = trace.minave_per_step;
  trace.result.in_cone = detail::monotone_levels(
      trace.result.levels, cone_tolerance(d.values), /*strict=*/false);
  trace.result.squared_error =
      detail::residual_error(d.values, ls, trace.result.levels);
  return trace;
}

bool certify_upgma_projection(const UpgmaTrace& trace,
                              const DissimilarityMap& d) {
  ProjectionOutcome proj = project_subspace(d, trace.chain);
  double scale = 1.0;
  for (double v : d.values) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < proj.levels.size(); ++k)
    if (std::abs(proj.levels[k] - trace.result.levels[k]) > 1e-12 * scale)
      return false;
  for (std::size_t k = 0; k + 1 < trace.result.levels.size(); ++k)
    if (trace.result.levels[k] > trace.result.levels[k + 1]) return false;
  return true;
}

namespace {

void tie_rec(Agglomerator& agg, std::vector<MergeStep>& acc, int n,
             std::set<ChainKey>& seen, std::vector<MergeChain>& out) {
  std::size_t m = agg.blocks.size();
  if (m == 1) {
    MergeChain chain{n, acc};
    if (seen.insert(chain_key(chain)).second) out.push_back(chain);
    return;
  }
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (agg.less(i, j, bi, bj)) {
        bi = i;
        bj = j;
      }
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (agg.equal(i, j, bi, bj)) {
        Agglomerator branch = agg;
        acc.push_back(branch.merge(i, j));
        tie_rec(branch, acc, n, seen, out);
        acc.pop_back();
      }
}

}  // namespace

std::vector<MergeChain> upgma_tie_chains(const DissimilarityMap& d) {
  if (d.n() > kTieChainsCap)
    throw CapacityError("tie enumeration capped at n = " +
                        std::to_string(kTieChainsCap));
  Agglomerator agg(d);
  std::vector<MergeStep> acc;
  std::set<ChainKey> seen;
  std::vector<MergeChain> out;
  tie_rec(agg, acc, d.n(), seen, out);
  return out;
}

}  // namespace eqtree
