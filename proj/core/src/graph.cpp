#include "zmlt/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace zmlt {

WeightedGraph::WeightedGraph(std::vector<NodeRecord> nodes, std::span<const EdgeRecord> edges)
    : nodes_(std::move(nodes)) {
  index_.reserve(nodes_.size());
  for (NodeIndex v = 0; v < nodes_.size(); ++v) index_.emplace(nodes_[v].id, v);  // first wins

  adjacency_.resize(nodes_.size());
  edges_.reserve(edges.size());
  for (const auto& rec : edges) {
    NodeIndex a = index_of(rec.u);
    NodeIndex b = index_of(rec.v);
    if (a > b) std::swap(a, b);
    const auto e = static_cast<EdgeIndex>(edges_.size());
    edges_.push_back({{a, b}, rec.weight});
    adjacency_[a].push_back({b, e});
    if (a != b) adjacency_[b].push_back({a, e});
  }

  std::vector<NodeIndex> by_id(nodes_.size());
  std::iota(by_id.begin(), by_id.end(), NodeIndex{0});
  std::stable_sort(by_id.begin(), by_id.end(),
                   [&](NodeIndex x, NodeIndex y) { return nodes_[x].id < nodes_[y].id; });
  id_rank_.resize(nodes_.size());
  for (std::uint32_t r = 0; r < by_id.size(); ++r) id_rank_[by_id[r]] = r;
}

std::optional<NodeIndex> WeightedGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex WeightedGraph::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw Error(ErrorCode::UnknownNode, "unknown node id '" + std::string(id) + "'");
}

std::optional<EdgeIndex> WeightedGraph::find_edge(NodeIndex u, NodeIndex v) const {
  const auto& adj = adjacency_.at(u);
  for (const auto& inc : adj)
    if (inc.neighbor == v) return inc.edge;
  return std::nullopt;
}

std::vector<NodeIndex> WeightedGraph::importance_order() const {
  std::vector<NodeIndex> order(nodes_.size());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    if (nodes_[a].weight != nodes_[b].weight) return nodes_[a].weight > nodes_[b].weight;
    return id_rank_[a] < id_rank_[b];
  });
  return order;
}

std::optional<Error> validate_graph(const WeightedGraph& g) {
  {
    std::set<std::string_view> seen;
    for (const auto& n : g.nodes())
      if (!seen.insert(n.id).second)
        return Error(ErrorCode::DuplicateNodeId, "duplicate node id '" + n.id + "'");
  }
  for (const auto& n : g.nodes())
    if (!(n.weight > 0.0))
      return Error(ErrorCode::NonPositiveWeight, "node '" + n.id + "' has non-positive weight");
  for (const auto& e : g.edges())
    if (!(e.weight > 0.0))
      return Error(ErrorCode::NonPositiveWeight, "edge '" + g.id(e.ends.u) + "'-'" +
                                                     g.id(e.ends.v) + "' has non-positive weight");
  for (const auto& e : g.edges())
    if (e.ends.u == e.ends.v)
      return Error(ErrorCode::SelfLoop, "self-loop at '" + g.id(e.ends.u) + "'");
  {
    std::set<NodePair> seen;
    for (const auto& e : g.edges())
      if (!seen.insert(e.ends).second)
        return Error(ErrorCode::DuplicateEdge,
                     "parallel edge '" + g.id(e.ends.u) + "'-'" + g.id(e.ends.v) + "'");
  }
  if (g.node_count() == 0) return Error(ErrorCode::DisconnectedGraph, "graph has no nodes");

  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeIndex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (const auto& inc : g.neighbors(v)) {
      if (seen[inc.neighbor]) continue;
      seen[inc.neighbor] = 1;
      ++reached;
      stack.push_back(inc.neighbor);
    }
  }
  if (reached != g.node_count()) {
    const auto missing = static_cast<NodeIndex>(std::find(seen.begin(), seen.end(), 0) - seen.begin());
    return Error(ErrorCode::DisconnectedGraph,
                 "graph is disconnected: '" + g.id(missing) + "' unreachable from '" + g.id(0) + "'");
  }
  return std::nullopt;
}

void require_valid(const WeightedGraph& g) {
  if (auto err = validate_graph(g)) throw *err;
}

std::vector<NodeIndex> NodeFiltration::members(int level) const {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < level_of.size(); ++v)
    if (level_of[v] <= level) out.push_back(v);
  return out;
}

std::size_t utf8_length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (unsigned char c : text)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::vector<LabelBox> assign_font_sizes(const WeightedGraph& g, const NodeFiltration& filtration,
                                        std::span<const double> font_sizes,
                                        const LabelMetrics& metrics) {
  if (font_sizes.size() != static_cast<std::size_t>(filtration.levels))
    throw Error(ErrorCode::WrongLength, "expected " + std::to_string(filtration.levels) +
                                            " font sizes, got " + std::to_string(font_sizes.size()));
  for (std::size_t i = 0; i < font_sizes.size(); ++i) {
    if (!(font_sizes[i] > 0.0)) throw Error(ErrorCode::NotDecreasing, "font sizes must be positive");
    if (i > 0 && !(font_sizes[i] < font_sizes[i - 1]))
      throw Error(ErrorCode::NotDecreasing, "font sizes must be strictly decreasing");
  }

  std::vector<LabelBox> boxes(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const double font = font_sizes[static_cast<std::size_t>(filtration.level_of.at(v) - 1)];
    // Empty labels still occupy one character cell so every box has area.
    const auto chars = std::max<std::size_t>(1, utf8_length(g.node(v).label));
    boxes[v] = {v, font, metrics.char_width_factor * font * static_cast<double>(chars),
                metrics.line_height_factor * font};
  }
  return boxes;
}

}  // namespace zmlt
