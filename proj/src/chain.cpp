#include "eqtree/chain.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace eqtree {

namespace {

// Blocks of the running partition, kept sorted by minimum element.
std::vector<std::vector<int>> singleton_blocks(int n) {
  std::vector<std::vector<int>> blocks(n);
  for (int i = 0; i < n; ++i) blocks[i] = {i};
  return blocks;
}

std::vector<int> merge_blocks(const std::vector<int>& a,
                              const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Applies one step; returns false if the step's blocks are not present.
bool apply_step(std::vector<std::vector<int>>& blocks, const MergeStep& step) {
  auto find = [&](const std::vector<int>& b) {
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i] == b) return static_cast<int>(i);
    return -1;
  };
  int ia = find(step.left);
  int ib = find(step.right);
  if (ia < 0 || ib < 0 || ia == ib) return false;
  std::vector<int> merged = merge_blocks(blocks[ia], blocks[ib]);
  if (ib < ia) std::swap(ia, ib);
  blocks.erase(blocks.begin() + ib);
  blocks.erase(blocks.begin() + ia);
  auto pos = std::lower_bound(
      blocks.begin(), blocks.end(), merged,
      [](const auto& x, const auto& y) { return x.front() < y.front(); });
  blocks.insert(pos, std::move(merged));
  return true;
}

}  // namespace

void validate_chain(const MergeChain& chain) {
  if (chain.n < 2) throw Error("chain needs n >= 2");
  if (chain.merges.size() != static_cast<std::size_t>(chain.n - 1))
    throw Error("chain must have n-1 merges");
  auto blocks = singleton_blocks(chain.n);
  for (const auto& step : chain.merges) {
    if (step.left.empty() || step.right.empty() ||
        step.left.front() >= step.right.front())
      throw Error("merge step blocks out of canonical order");
    if (!apply_step(blocks, step))
      throw Error("merge step does not match the running partition");
  }
}

std::vector<Partition> chain_partitions(const MergeChain& chain) {
  std::vector<Partition> out;
  out.reserve(chain.n);
  auto blocks = singleton_blocks(chain.n);
  out.push_back(Partition{chain.n, blocks});
  for (const auto& step : chain.merges) {
    if (!apply_step(blocks, step)) throw Error("invalid chain");
    out.push_back(Partition{chain.n, blocks});
  }
  return out;
}

ChainKey chain_key(const MergeChain& chain) {
  ChainKey key;
  key.reserve(chain.merges.size());
  for (const auto& step : chain.merges)
    key.emplace_back(step.left.front(), step.right.front());
  return key;
}

std::string chain_key_string(const MergeChain& chain) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, b] : chain_key(chain)) {
    if (!first) os << ',';
    first = false;
    os << a << '-' << b;
  }
  return os.str();
}

std::vector<std::vector<std::uint32_t>> level_sets(const MergeChain& chain) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(chain.merges.size());
  for (const auto& step : chain.merges) {
    std::vector<std::uint32_t> level;
    level.reserve(step.left.size() * step.right.size());
    for (int a : step.left)
      for (int b : step.right) {
        int i = a, j = b;
        if (i > j) std::swap(i, j);
        level.push_back(static_cast<std::uint32_t>(pair_index(i, j, chain.n)));
      }
    std::sort(level.begin(), level.end());
    out.push_back(std::move(level));
  }
  return out;
}

std::uint64_t chain_count(int n) {
  // n! (n-1)! / 2^(n-1)
  std::uint64_t num = 1;
  for (int k = 2; k <= n; ++k) num *= k;
  for (int k = 2; k <= n - 1; ++k) num *= k;
  return num >> (n - 1);
}

namespace {

void enumerate_rec(int n, std::vector<std::vector<int>>& blocks,
                   std::vector<MergeStep>& acc,
                   const std::function<void(const MergeChain&)>& fn) {
  if (blocks.size() == 1) {
    fn(MergeChain{n, acc});
    return;
  }
  // Blocks are ordered by min element, so (i,j) iteration is the canonical
  // lexicographic order of merge keys.
  std::size_t m = blocks.size();
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      MergeStep step{blocks[i], blocks[j]};
      auto saved = blocks;
      apply_step(blocks, step);
      acc.push_back(std::move(step));
      enumerate_rec(n, blocks, acc, fn);
      acc.pop_back();
      blocks = std::move(saved);
    }
}

}  // namespace

void enumerate_chains(int n,
                      const std::function<void(const MergeChain&)>& fn) {
  if (n < 2) throw Error("need n >= 2");
  if (n > kEnumerateChainsCap)
    throw CapacityError("chain enumeration capped at n = " +
                        std::to_string(kEnumerateChainsCap));
  auto blocks = singleton_blocks(n);
  std::vector<MergeStep> acc;
  enumerate_rec(n, blocks, acc, fn);
}

std::vector<MergeChain> all_chains(int n) {
  std::vector<MergeChain> out;
  out.reserve(n <= 7 ? chain_count(n) : 0);
  enumerate_chains(n, [&](const MergeChain& c) { out.push_back(c); });
  return out;
}

std::string chain_topology(const MergeChain& chain,
                           const std::vector<std::string>& labels) {
  if (labels.size() != static_cast<std::size_t>(chain.n))
    throw DimensionError("label count does not match chain");
  // Subtree string per block, keyed by block minimum.
  std::map<int, std::string> sub;
  for (int i = 0; i < chain.n; ++i) sub[i] = labels[i];
  for (const auto& step : chain.merges) {
    std::string a = sub.at(step.left.front());
    std::string b = sub.at(step.right.front());
    if (b < a) std::swap(a, b);
    sub.erase(step.right.front());
    sub[step.left.front()] = "(" + a + "," + b + ")";
  }
  return sub.begin()->second;
}

std::string chain_topology(const MergeChain& chain) {
  return chain_topology(chain, default_taxa(chain.n).labels);
}

}  // namespace eqtree
