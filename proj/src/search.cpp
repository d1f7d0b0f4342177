#include "eqtree/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "eqtree/upgma.hpp"

namespace eqtree {

std::vector<MergeChain> chain_neighbors(const MergeChain& chain) {
  auto parts = chain_partitions(chain);
  int n = chain.n;
  std::vector<MergeChain> out;
  for (int r = 1; r <= n - 2; ++r) {
    const auto& lower = parts[r - 1].blocks;
    const auto& upper = parts[r + 1].blocks;
    // Upper block id per element.
    std::vector<int> up(n);
    for (std::size_t u = 0; u < upper.size(); ++u)
      for (int e : upper[u]) up[e] = static_cast<int>(u);
    for (std::size_t i = 0; i + 1 < lower.size(); ++i)
      for (std::size_t j = i + 1; j < lower.size(); ++j) {
        // A valid intermediate merges two lower blocks lying in one upper
        // block.
        if (up[lower[i].front()] != up[lower[j].front()]) continue;
        MergeStep first{lower[i], lower[j]};
        if (first == chain.merges[r - 1]) continue;
        // Remaining blocks of the intermediate partition, grouped by upper
        // block; exactly one upper block still holds two of them.
        std::vector<std::vector<int>> inter;
        inter.push_back(
            [&] {
              std::vector<int> m;
              std::merge(lower[i].begin(), lower[i].end(), lower[j].begin(),
                         lower[j].end(), std::back_inserter(m));
              return m;
            }());
        for (std::size_t u = 0; u < lower.size(); ++u)
          if (u != i && u != j) inter.push_back(lower[u]);
        std::vector<std::vector<int>> pending;
        for (auto& b : inter) {
          bool merged_now = true;
          // The second replaced step merges the two intermediate blocks that
          // share an upper block and are not already an upper block.
          for (const auto& ub : upper)
            if (b == ub) merged_now = false;
          if (merged_now) pending.push_back(b);
        }
        if (pending.size() != 2) continue;  // cannot happen on valid input
        if (pending[0].front() > pending[1].front())
          std::swap(pending[0], pending[1]);
        MergeChain nb = chain;
        nb.merges[r - 1] = first;
        nb.merges[r] = MergeStep{pending[0], pending[1]};
        out.push_back(std::move(nb));
      }
  }
  return out;
}

ConeGraph cone_graph(const DissimilarityMap& d) {
  if (d.n() > kConeGraphCap)
    throw CapacityError("cone graph capped at n = " +
                        std::to_string(kConeGraphCap));
  ConeGraph g;
  std::map<ChainKey, int> index;
  enumerate_chains(d.n(), [&](const MergeChain& c) {
    if (in_projection_cone(d, c)) {
      index.emplace(chain_key(c), static_cast<int>(g.vertices.size()));
      g.vertices.push_back(c);
    }
  });
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    for (const auto& nb : chain_neighbors(g.vertices[v])) {
      auto it = index.find(chain_key(nb));
      if (it != index.end() && static_cast<int>(v) < it->second)
        g.edges.emplace_back(static_cast<int>(v), it->second);
    }
  g.component.assign(g.vertices.size(), -1);
  std::vector<std::vector<int>> adj(g.vertices.size());
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.component[v] >= 0) continue;
    std::deque<int> queue{static_cast<int>(v)};
    g.component[v] = g.component_count;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int w : adj[u])
        if (g.component[w] < 0) {
          g.component[w] = g.component_count;
          queue.push_back(w);
        }
    }
    ++g.component_count;
  }
  return g;
}

ExtendedUpgmaResult extended_upgma(const DissimilarityMap& d) {
  UpgmaTrace start = upgma(d);
  ExtendedUpgmaResult res;
  res.best = project_subspace(d, start.chain);
  res.visited_count = 1;
  std::set<ChainKey> visited{chain_key(start.chain)};
  std::deque<MergeChain> queue{start.chain};
  while (!queue.empty()) {
    MergeChain cur = std::move(queue.front());
    queue.pop_front();
    for (auto& nb : chain_neighbors(cur)) {
      if (!visited.insert(chain_key(nb)).second) continue;
      if (!in_projection_cone(d, nb)) {
        visited.erase(chain_key(nb));
        continue;
      }
      ProjectionOutcome outcome = project_subspace(d, nb);
      ++res.visited_count;
      if (outcome.squared_error < res.best.squared_error)
        res.best = outcome;
      queue.push_back(std::move(nb));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Exact branch-and-bound sweep over the Hasse diagram of the partition
// lattice.

namespace {

// Blocks as bitmasks, partition as blocks sorted by lowest element.
using BlockMask = std::uint16_t;
using PartKey = std::vector<BlockMask>;

template <typename S>
struct DpLabel {
  S x;             // level average over the pairs the edge adds
  S ell;           // accumulated cost
  std::int32_t prev;  // arena index of the chosen predecessor, -1 at rank 0
  std::uint8_t a, b;  // min elements of the merged blocks
};

template <typename S>
struct DpSweep {
  int n;
  const std::vector<S>& d;
  std::vector<DpLabel<S>> arena;
  SearchStats stats;

  DpSweep(int n, const std::vector<S>& d) : n(n), d(d) {}

  S value(int i, int j) const {
    return d[pair_index(std::min(i, j), std::max(i, j), n)];
  }

  // Mean and squared deviation of d over the cross pairs of two blocks.
  void edge_cost(BlockMask ma, BlockMask mb, S& x, S& w) const {
    if constexpr (std::is_same_v<S, double>) {
      double s = 0.0, c = 0.0;
      int cnt = 0;
      for (int i = 0; i < n; ++i) {
        if (!(ma >> i & 1)) continue;
        for (int j = 0; j < n; ++j) {
          if (!(mb >> j & 1)) continue;
          double v = value(i, j);
          double t = s + v;
          c += (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
          s = t;
          ++cnt;
        }
      }
      x = (s + c) / cnt;
      double ws = 0.0, wc = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!(ma >> i & 1)) continue;
        for (int j = 0; j < n; ++j) {
          if (!(mb >> j & 1)) continue;
          double r = value(i, j) - x;
          double v = r * r;
          double t = ws + v;
          wc += (ws >= v) ? (ws - t) + v : (v - t) + ws;
          ws = t;
        }
      }
      w = ws + wc;
    } else {
      S s = 0;
      int cnt = 0;
      for (int i = 0; i < n; ++i) {
        if (!(ma >> i & 1)) continue;
        for (int j = 0; j < n; ++j) {
          if (!(mb >> j & 1)) continue;
          s += value(i, j);
          ++cnt;
        }
      }
      x = s / cnt;
      S ws = 0;
      for (int i = 0; i < n; ++i) {
        if (!(ma >> i & 1)) continue;
        for (int j = 0; j < n; ++j) {
          if (!(mb >> j & 1)) continue;
          S r = value(i, j) - x;
          ws += r * r;
        }
      }
      w = ws;
    }
  }

  MergeChain run() {
    // Rank k holds partitions with n-k blocks; incoming labels per node.
    std::map<PartKey, std::vector<std::int32_t>> current;
    PartKey singletons;
    for (int i = 0; i < n; ++i)
      singletons.push_back(static_cast<BlockMask>(1u << i));
    current.emplace(singletons, std::vector<std::int32_t>{});
    std::vector<std::int32_t> top_labels;
    for (int k = 0; k < n - 1; ++k) {
      std::map<PartKey, std::vector<std::int32_t>> next;
      for (auto& [blocks, in] : current) {
        // Incoming labels sorted by (x, ell, id); prefix argmin of ell makes
        // the feasible-predecessor query a binary search plus a lookup.
        std::sort(in.begin(), in.end(), [&](std::int32_t a, std::int32_t b) {
          if (arena[a].x != arena[b].x) return arena[a].x < arena[b].x;
          if (arena[a].ell != arena[b].ell) return arena[a].ell < arena[b].ell;
          return a < b;
        });
        std::vector<std::int32_t> prefix_best(in.size());
        for (std::size_t t = 0; t < in.size(); ++t) {
          prefix_best[t] = t == 0 ? in[0]
                           : (arena[in[t]].ell < arena[prefix_best[t - 1]].ell
                                  ? in[t]
                                  : prefix_best[t - 1]);
        }
        std::size_t m = blocks.size();
        for (std::size_t i = 0; i + 1 < m; ++i)
          for (std::size_t j = i + 1; j < m; ++j) {
            S x, w;
            edge_cost(blocks[i], blocks[j], x, w);
            std::int32_t prev = -1;
            S base{};
            if (k > 0) {
              // Rightmost incoming label with x(f) <= x(e).
              std::size_t lo = 0, hi = in.size();
              while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (arena[in[mid]].x <= x)
                  lo = mid + 1;
                else
                  hi = mid;
              }
              if (lo == 0) {
                ++stats.dp_pruned;
                continue;
              }
              prev = prefix_best[lo - 1];
              base = arena[prev].ell;
            }
            DpLabel<S> label;
            label.x = x;
            label.ell = base + w;
            label.prev = prev;
            label.a = static_cast<std::uint8_t>(
                std::countr_zero(static_cast<unsigned>(blocks[i])));
            label.b = static_cast<std::uint8_t>(
                std::countr_zero(static_cast<unsigned>(blocks[j])));
            arena.push_back(std::move(label));
            std::int32_t id = static_cast<std::int32_t>(arena.size()) - 1;
            ++stats.dp_edges;
            PartKey merged;
            merged.reserve(m - 1);
            BlockMask unified = blocks[i] | blocks[j];
            for (std::size_t u = 0; u < m; ++u)
              if (u != i && u != j) merged.push_back(blocks[u]);
            merged.push_back(unified);
            std::sort(merged.begin(), merged.end(),
                      [](BlockMask a, BlockMask b) {
                        return std::countr_zero(static_cast<unsigned>(a)) <
                               std::countr_zero(static_cast<unsigned>(b));
                      });
            if (k == n - 2)
              top_labels.push_back(id);
            else
              next[merged].push_back(id);
          }
        in.clear();
        in.shrink_to_fit();
      }
      current = std::move(next);
    }
    // Best incoming edge of the top partition; the level monotonicity along
    // the path is already enforced by the predecessor constraint.
    std::int32_t best = top_labels.front();
    for (std::int32_t id : top_labels) {
      if (arena[id].ell < arena[best].ell ||
          (arena[id].ell == arena[best].ell && arena[id].x < arena[best].x))
        best = id;
    }
    // Replay the backpointer path from the top down, then rebuild the chain
    // from singletons.
    std::vector<std::pair<int, int>> merges_rev;
    for (std::int32_t id = best; id >= 0; id = arena[id].prev)
      merges_rev.emplace_back(arena[id].a, arena[id].b);
    MergeChain chain;
    chain.n = n;
    std::map<int, std::vector<int>> rep;
    for (int i = 0; i < n; ++i) rep[i] = {i};
    for (auto it = merges_rev.rbegin(); it != merges_rev.rend(); ++it) {
      auto [a, b] = *it;
      std::vector<int> merged;
      std::merge(rep[a].begin(), rep[a].end(), rep[b].begin(), rep[b].end(),
                 std::back_inserter(merged));
      chain.merges.push_back(MergeStep{rep[a], rep[b]});
      rep.erase(b);
      rep[a] = std::move(merged);
    }
    return chain;
  }
};

void check_exact_cap(int n) {
  if (n < 2) throw DegenerateInputError("need n >= 2");
  if (n > kExactSearchCap)
    throw CapacityError("exact search capped at n = " +
                        std::to_string(kExactSearchCap));
}

}  // namespace

ProjectionOutcome exact_search(const DissimilarityMap& d, SearchStats* stats) {
  check_exact_cap(d.n());
  DpSweep<double> sweep(d.n(), d.values);
  MergeChain chain = sweep.run();
  if (stats) *stats = sweep.stats;
  return project_subspace(d, chain);
}

ProjectionOutcome brute_force_optimum(const DissimilarityMap& d) {
  if (d.n() > kBruteForceCap)
    throw CapacityError("brute force capped at n = " +
                        std::to_string(kBruteForceCap));
  ProjectionOutcome best;
  bool have = false;
  enumerate_chains(d.n(), [&](const MergeChain& c) {
    ProjectionOutcome outcome = project_cone(d, c);
    if (!have || outcome.squared_error < best.squared_error) {
      best = std::move(outcome);
      have = true;
    }
  });
  return best;
}

namespace exact {

ProjectionOutcome exact_search(const std::vector<Rational>& values, int n,
                               SearchStats* stats) {
  check_exact_cap(n);
  if (values.size() != pair_count(n))
    throw DimensionError("value vector length does not match C(n,2)");
  DpSweep<Rational> sweep(n, values);
  MergeChain chain = sweep.run();
  if (stats) *stats = sweep.stats;
  return project_subspace(values, chain);
}

ProjectionOutcome brute_force_optimum(const std::vector<Rational>& values,
                                      int n) {
  if (n > kBruteForceCap)
    throw CapacityError("brute force capped at n = " +
                        std::to_string(kBruteForceCap));
  if (values.size() != pair_count(n))
    throw DimensionError("value vector length does not match C(n,2)");
  ProjectionOutcome best;
  bool have = false;
  enumerate_chains(n, [&](const MergeChain& c) {
    ProjectionOutcome outcome = project_cone(values, c);
    if (!have || outcome.squared_error < best.squared_error) {
      best = std::move(outcome);
      have = true;
    }
  });
  return best;
}

}  // namespace exact

}  // namespace eqtree
