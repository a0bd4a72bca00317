#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zmlt/error.hpp"

namespace zmlt {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

inline constexpr NodeIndex kNoNode = static_cast<NodeIndex>(-1);

struct NodeRecord {
  std::string id;
  std::string label;
  double weight = 1.0;
};

struct EdgeRecord {
  std::string u;
  std::string v;
  double weight = 1.0;
};

/// Endpoints of an edge, by node index. Stored with u < v for graph edges.
struct NodePair {
  NodeIndex u = kNoNode;
  NodeIndex v = kNoNode;

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct GraphEdge {
  NodePair ends;
  double weight = 1.0;
};

struct Incidence {
  NodeIndex neighbor;
  EdgeIndex edge;
};

/// Undirected node- and edge-weighted graph with string node ids.
///
/// Construction resolves edge endpoints to indices and builds adjacency but
/// does not enforce the graph invariants; call validate_graph() for that.
/// Edges referencing an unknown id throw UnknownNode.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::vector<NodeRecord> nodes, std::span<const EdgeRecord> edges);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const NodeRecord& node(NodeIndex v) const { return nodes_.at(v); }
  const GraphEdge& edge(EdgeIndex e) const { return edges_.at(e); }
  std::span<const NodeRecord> nodes() const noexcept { return nodes_; }
  std::span<const GraphEdge> edges() const noexcept { return edges_; }
  std::span<const Incidence> neighbors(NodeIndex v) const { return adjacency_.at(v); }

  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex index_of(std::string_view id) const;  // throws UnknownNode
  const std::string& id(NodeIndex v) const { return nodes_.at(v).id; }

  /// Edge between u and v, if any.
  std::optional<EdgeIndex> find_edge(NodeIndex u, NodeIndex v) const;

  /// Position of each node in ascending node-id order; used for tie-breaking.
  std::span<const std::uint32_t> id_rank() const noexcept { return id_rank_; }

  /// Node indices sorted by (descending weight, ascending id).
  std::vector<NodeIndex> importance_order() const;

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::uint32_t> id_rank_;
};

/// Checks every WeightedGraph invariant; returns the first violation found,
/// in the order: duplicate ids, weights, self-loops, parallel edges, connectivity.
std::optional<Error> validate_graph(const WeightedGraph& g);

/// Throwing form of validate_graph().
void require_valid(const WeightedGraph& g);

/// Nested node sets V_1 ⊂ ... ⊂ V_n, stored as a level per node (1-based).
struct NodeFiltration {
  int levels = 0;
  std::vector<int> level_of;          // indexed by NodeIndex
  std::vector<double> percentages;    // cumulative fractions, last == 1
  std::vector<std::size_t> counts;    // |V_i|

  bool contains(int level, NodeIndex v) const { return level_of.at(v) <= level; }
  std::vector<NodeIndex> members(int level) const;
};

struct LabelMetrics {
  double char_width_factor = 0.6;
  double line_height_factor = 1.2;
};

/// Axis-aligned label rectangle centred on its node.
struct LabelBox {
  NodeIndex node = kNoNode;
  double font_size = 0.0;
  double width = 0.0;
  double height = 0.0;

  double half_width() const noexcept { return 0.5 * width; }
  double half_height() const noexcept { return 0.5 * height; }
  double area() const noexcept { return width * height; }
};

/// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text) noexcept;

/// Sizes every node's label box by the font of its filtration level.
/// font_sizes[i] applies to level i+1 and must be strictly decreasing.
std::vector<LabelBox> assign_font_sizes(const WeightedGraph& g, const NodeFiltration& filtration,
                                        std::span<const double> font_sizes,
                                        const LabelMetrics& metrics = {});

}  // namespace zmlt
