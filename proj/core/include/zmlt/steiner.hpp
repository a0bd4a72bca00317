#pragma once

#include <optional>
#include <span>
#include <vector>

#include "zmlt/graph.hpp"

namespace zmlt {

/// Reciprocal weights are clamped here so tiny weights stay finite.
inline constexpr double kCostCap = 1e6;

/// Minimization view of a weighted graph: cost = 1 / weight, capped.
class SteinerCostView {
 public:
  explicit SteinerCostView(const WeightedGraph& g);

  double edge_cost(EdgeIndex e) const { return edge_cost_.at(e); }
  double node_cost(NodeIndex v) const { return node_cost_.at(v); }

 private:
  std::vector<double> edge_cost_;
  std::vector<double> node_cost_;
};

/// Sorts nodes by (descending weight, ascending id) and cuts the order at
/// round(p_i * |V|). Percentages may be fractions or, when the last one is
/// 100, percents. Each level receives at least one node.
NodeFiltration build_filtration(const WeightedGraph& g, std::span<const double> percentages);

/// Nested trees T_1 ⊆ ... ⊆ T_n over a graph's edges.
struct LevelHierarchy {
  NodeFiltration filtration;
  std::vector<std::vector<EdgeIndex>> trees;       // sorted edge ids of T_i
  std::vector<std::vector<NodeIndex>> tree_nodes;  // sorted node ids of T_i
  std::vector<std::vector<NodeIndex>> steiner;     // nodes(T_i) \ V_i, sorted

  int levels() const noexcept { return filtration.levels; }

  /// Smallest level whose tree contains the node, 0 if none.
  std::vector<int> node_entry_level() const;
  /// Smallest level whose tree contains the edge, 0 if none; indexed by EdgeIndex.
  std::vector<int> edge_entry_level(std::size_t edge_count) const;

  /// Edges of T_level (1-based) as node pairs.
  std::vector<NodePair> tree_pairs(const WeightedGraph& g, int level) const;
};

/// Builds tree_nodes and steiner from the filtration and edge sets. A tree
/// without edges consists of the heaviest node of V_1.
LevelHierarchy make_hierarchy(const WeightedGraph& g, NodeFiltration filtration,
                              std::vector<std::vector<EdgeIndex>> trees);

/// Checks nesting, reality, tree shape and spanning of every level.
std::optional<Error> check_hierarchy(const WeightedGraph& g, const LevelHierarchy& h);

/// Multi-level Steiner tree extraction.
///
/// Level by level, the tree grows from the previous level's tree (or the
/// heaviest terminal) by repeatedly attaching the cheapest shortest path to an
/// unreached terminal, where entering a node not yet in the tree costs its
/// node cost. Each level is then replaced by a minimum spanning tree of its
/// node set that keeps the previous level's edges, and non-terminal leaves
/// that are new at this level are pruned.
LevelHierarchy extract_hierarchy(const WeightedGraph& g, const NodeFiltration& filtration);

/// Sum of edge costs plus node costs of the given tree.
double tree_cost(const SteinerCostView& costs, std::span<const EdgeIndex> edges,
                 std::span<const NodeIndex> nodes);

/// Sum over levels of tree_cost(T_i).
double hierarchy_cost(const WeightedGraph& g, const LevelHierarchy& h);

/// A branch of F_{i+1} hanging off one node of T_i.
struct RootedSubtree {
  NodeIndex root = kNoNode;
  std::vector<NodeIndex> nodes;  // preorder, root first
  std::vector<NodePair> edges;   // (parent, child), in child preorder
};

/// Components of E(T_{level+1}) \ E(T_level), split at their attachment
/// node so that each returned subtree shares exactly its root with T_level.
/// Sorted by (root id, first child id).
std::vector<RootedSubtree> level_forest(const WeightedGraph& g, const LevelHierarchy& h, int level);

}  // namespace zmlt
