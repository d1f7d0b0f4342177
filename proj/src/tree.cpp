#include "eqtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "eqtree/errors.hpp"

namespace eqtree {

std::vector<double> expand_ultrametric(const Ultrametric& x) {
  std::vector<double> out(pair_count(x.chain.n));
  auto levels = level_sets(x.chain);
  for (std::size_t k = 0; k < levels.size(); ++k)
    for (std::uint32_t p : levels[k]) out[p] = x.levels[k];
  return out;
}

EquidistantTree tree_from_ultrametric(const Ultrametric& x,
                                      const TaxonSet& taxa) {
  int n = x.chain.n;
  if (taxa.size() != n) throw DimensionError("taxon count mismatch");
  if (x.levels.size() != static_cast<std::size_t>(n - 1))
    throw DimensionError("level count mismatch");
  double scale = 1.0;
  for (double v : x.levels) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k + 1 < x.levels.size(); ++k)
    if (x.levels[k] > x.levels[k + 1] + 1e-12 * scale)
      throw NotUltrametricError("levels must be nondecreasing");

  EquidistantTree tree;
  tree.n_leaves = n;
  tree.nodes.resize(n);
  for (int i = 0; i < n; ++i) tree.nodes[i].label = taxa.labels[i];
  // Current tree node per block, keyed by block minimum.
  std::map<int, int> rep;
  for (int i = 0; i < n; ++i) rep[i] = i;
  for (std::size_t k = 0; k < x.chain.merges.size(); ++k) {
    const auto& step = x.chain.merges[k];
    int a = rep.at(step.left.front());
    int b = rep.at(step.right.front());
    EquidistantTree::Node node;
    node.height = x.levels[k] / 2.0;
    node.children = {a, b};
    tree.nodes.push_back(node);
    int id = static_cast<int>(tree.nodes.size()) - 1;
    tree.nodes[a].parent = id;
    tree.nodes[b].parent = id;
    rep.erase(step.right.front());
    rep[step.left.front()] = id;
  }
  return tree;
}

EquidistantTree tree_from_ultrametric(const Ultrametric& x) {
  return tree_from_ultrametric(x, default_taxa(x.chain.n));
}

std::vector<double> pairwise_distances(const EquidistantTree& tree) {
  int n = tree.n_leaves;
  std::vector<double> out(pair_count(n), 0.0);
  // Leaves under each internal node; x(i,j) = 2 * height of the lca. Walk
  // internal nodes in creation order so children's leaf sets are ready.
  std::vector<std::vector<int>> leaves(tree.nodes.size());
  for (int i = 0; i < n; ++i) leaves[i] = {i};
  for (std::size_t v = n; v < tree.nodes.size(); ++v) {
    const auto& node = tree.nodes[v];
    for (std::size_t c1 = 0; c1 + 1 < node.children.size(); ++c1)
      for (std::size_t c2 = c1 + 1; c2 < node.children.size(); ++c2)
        for (int i : leaves[node.children[c1]])
          for (int j : leaves[node.children[c2]]) {
            int a = i, b = j;
            if (a > b) std::swap(a, b);
            out[pair_index(a, b, n)] = 2.0 * node.height;
          }
    for (int c : node.children)
      leaves[v].insert(leaves[v].end(), leaves[c].begin(), leaves[c].end());
  }
  return out;
}

}  // namespace eqtree
