#ifndef EQTREE_TREE_HPP
#define EQTREE_TREE_HPP

#include <string>
#include <vector>

#include "eqtree/chain.hpp"
#include "eqtree/pairs.hpp"

namespace eqtree {

// A candidate ultrametric: one value per chain level, nondecreasing.
// The expanded pair vector assigns levels[k] to every pair in level set k.
struct Ultrametric {
  MergeChain chain;
  std::vector<double> levels;
};

// Expansion to the full pair-indexed vector x(i,j).
std::vector<double> expand_ultrametric(const Ultrametric& x);

// Rooted tree with node heights; leaves sit at height 0 and every
// leaf-to-root path has the same length. x(i,j) = 2 * height(lca(i,j)).
struct EquidistantTree {
  struct Node {
    int parent = -1;               // -1 for the root
    std::vector<int> children;     // empty for leaves
    double height = 0.0;
    std::string label;             // taxon name for leaves
  };

  // Nodes 0..n-1 are the leaves (taxon order); internal nodes follow.
  std::vector<Node> nodes;
  int n_leaves = 0;

  int root() const { return static_cast<int>(nodes.size()) - 1; }
  double edge_weight(int child) const {
    return nodes[nodes[child].parent].height - nodes[child].height;
  }
};

// Internal node at merge step k gets height levels[k]/2.
// Throws NotUltrametricError if the levels decrease.
EquidistantTree tree_from_ultrametric(const Ultrametric& x,
                                      const TaxonSet& taxa);
EquidistantTree tree_from_ultrametric(const Ultrametric& x);

// Pairwise leaf distances of the tree, in pair_index order.
std::vector<double> pairwise_distances(const EquidistantTree& tree);

}  // namespace eqtree

#endif
