#include "zmlt/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

#include "zmlt/geometry.hpp"

namespace zmlt {

namespace {

constexpr double kShrink = 0.7;
constexpr int kMaxShrinkSteps = 2000;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_planar(const Layout& layout, std::span<const NodePair> edges, const std::string& stage) {
  if (const auto crossings = count_crossings(layout, edges); crossings != 0)
    throw Error(ErrorCode::InvariantViolation,
                stage + " produced " + std::to_string(crossings) + " edge crossing(s)");
}

}  // namespace

Layout monotone_subtree_layout(const RootedSubtree& subtree, double unit_length, double half_angle) {
  if (!(unit_length > 0.0)) throw Error(ErrorCode::BadConfig, "unit length must be positive");
  if (subtree.nodes.empty() || subtree.nodes.front() != subtree.root ||
      subtree.edges.size() + 1 != subtree.nodes.size())
    throw Error(ErrorCode::NotATree, "subtree is not a rooted tree");

  std::unordered_map<NodeIndex, std::vector<NodeIndex>> children;
  std::unordered_map<NodeIndex, NodeIndex> parent;
  NodeIndex capacity = 0;
  for (NodeIndex v : subtree.nodes) capacity = std::max(capacity, v + 1);
  for (const auto& e : subtree.edges) {
    if (e.v == subtree.root || !parent.emplace(e.v, e.u).second)
      throw Error(ErrorCode::NotATree, "subtree node has two parents");
    children[e.u].push_back(e.v);
  }

  // Preorder from the root; a cycle or stray edge leaves nodes unreached.
  std::vector<NodeIndex> order{subtree.root};
  for (std::size_t k = 0; k < order.size(); ++k)
    if (auto it = children.find(order[k]); it != children.end())
      order.insert(order.end(), it->second.begin(), it->second.end());
  if (order.size() != subtree.nodes.size()) throw Error(ErrorCode::NotATree, "subtree is disconnected");

  std::unordered_map<NodeIndex, double> leaves;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double& own = leaves[*it];
    if (own == 0.0) own = 1.0;
    if (*it != subtree.root) leaves[parent.at(*it)] += own;
  }

  Layout layout(capacity);
  std::unordered_map<NodeIndex, std::pair<double, double>> wedge;  // start, width
  layout.set(subtree.root, {0.0, 0.0});
  wedge[subtree.root] = {-half_angle, 2.0 * half_angle};
  for (NodeIndex v : order) {
    auto it = children.find(v);
    if (it == children.end()) continue;
    auto [start, width] = wedge.at(v);
    const Point base = layout[v];
    for (NodeIndex c : it->second) {
      const double share = width * leaves.at(c) / leaves.at(v);
      const double theta = start + 0.5 * share;
      layout.set(c, base + Point{std::cos(theta), std::sin(theta)} * unit_length);
      wedge[c] = {start, share};
      start += share;
    }
  }
  return layout;
}

Layout augment(const Layout& layout, std::span<const NodePair> tree_edges,
               std::span<const RootedSubtree> forest, double unit_length,
               std::span<const std::uint32_t> id_rank, AugmentStats* stats) {
  auto rank = [&](NodeIndex v) -> std::uint64_t { return id_rank.empty() ? v : id_rank[v]; };
  for (const auto& sub : forest) {
    if (!layout.has(sub.root)) throw Error(ErrorCode::BadForest, "subtree root is not in the current tree");
    for (std::size_t k = 1; k < sub.nodes.size(); ++k)
      if (layout.has(sub.nodes[k]))
        throw Error(ErrorCode::BadForest, "subtree shares more than its root with the current tree");
  }

  Layout out = layout;
  std::vector<NodePair> edges(tree_edges.begin(), tree_edges.end());
  std::vector<Segment> segments;
  segments.reserve(edges.size());
  for (const auto& e : edges) segments.push_back(make_segment(out, e));

  // Roots by descending attached size, then by id; subtrees likewise per root.
  std::map<NodeIndex, std::vector<const RootedSubtree*>> by_root;
  for (const auto& sub : forest) by_root[sub.root].push_back(&sub);
  std::vector<std::pair<NodeIndex, std::size_t>> roots;
  for (auto& [root, subs] : by_root) {
    std::size_t total = 0;
    for (const auto* s : subs) total += s->nodes.size() - 1;
    roots.push_back({root, total});
    std::stable_sort(subs.begin(), subs.end(), [&](const RootedSubtree* a, const RootedSubtree* b) {
      if (a->nodes.size() != b->nodes.size()) return a->nodes.size() > b->nodes.size();
      return rank(a->nodes[1]) < rank(b->nodes[1]);
    });
  }
  std::stable_sort(roots.begin(), roots.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return rank(a.first) < rank(b.first);
  });

  for (const auto& [root, attached] : roots) {
    for (const RootedSubtree* sub : by_root.at(root)) {
      if (sub->nodes.size() < 2) continue;
      const auto cones = cones_around(out, edges, root);
      const Cone cone = *std::max_element(cones.begin(), cones.end(), [](const Cone& a, const Cone& b) {
        return a.width < b.width;
      });
      // Keep the drawing strictly inside the cone, away from its boundary rays.
      const double half_angle = std::min(std::numbers::pi / 4, 0.45 * cone.width);
      const Layout shape = monotone_subtree_layout(*sub, unit_length, half_angle);

      const Point apex = out.at(root);
      const double bisector = cone.bisector();
      std::vector<Point> placed(sub->nodes.size());
      std::vector<Segment> fresh(sub->edges.size());
      double scale = 1.0;
      for (int attempt = 0;; ++attempt) {
        if (attempt > kMaxShrinkSteps)
          throw Error(ErrorCode::InvariantViolation, "subtree at '" + std::to_string(root) + "' cannot be placed");
        bool ok = true;
        std::unordered_map<NodeIndex, Point> where;
        for (std::size_t k = 0; k < sub->nodes.size(); ++k) {
          const NodeIndex v = sub->nodes[k];
          placed[k] = k == 0 ? apex : apex + rotate(shape[v], bisector) * scale;
          where[v] = placed[k];
          if (k > 0) {
            const Point d = placed[k] - apex;
            if (norm(d) == 0.0 || !cone.contains_direction(std::atan2(d.y, d.x))) ok = false;
          }
        }
        for (std::size_t k = 0; k < sub->edges.size() && ok; ++k) {
          const auto& e = sub->edges[k];
          fresh[k] = {where.at(e.u), where.at(e.v), e};
          if (crosses_any(fresh[k], segments)) ok = false;
        }
        if (ok) break;
        scale *= kShrink;
        if (stats != nullptr) ++stats->shrink_steps;
      }

      for (std::size_t k = 1; k < sub->nodes.size(); ++k) out.set(sub->nodes[k], placed[k]);
      for (std::size_t k = 0; k < sub->edges.size(); ++k) {
        edges.push_back(sub->edges[k]);
        segments.push_back(fresh[k]);
      }
      if (stats != nullptr) ++stats->placements;
    }
  }
  require_planar(out, edges, "augment");
  return out;
}

Layout run_pipeline(const WeightedGraph& g, const LevelHierarchy& h, std::span<const LabelBox> boxes,
                    const ForceConfig& cfg, const StageCallback& on_stage, PipelineStats* stats) {
  cfg.validate();
  if (boxes.size() != g.node_count()) throw Error(ErrorCode::WrongLength, "one label box per node is required");
  const int n = h.levels();
  const auto edge_level = h.edge_entry_level(g.edge_count());

  auto lengths_for = [&](int level) {
    std::vector<int> levels;
    for (EdgeIndex e : h.trees[level - 1]) levels.push_back(edge_level[e]);
    return DesiredLengths::from_levels(levels, cfg);
  };

  auto edges = h.tree_pairs(g, 1);
  Layout layout = initial_layout(h.tree_nodes[0], edges, g.node_count(), cfg.base_edge_length, g.id_rank());
  require_planar(layout, edges, "initial layout");

  for (int level = 1; level <= n; ++level) {
    const auto lengths = lengths_for(level);
    ForceStats improve_stats;
    ForceStats overlap_stats;
    layout = impred_improve(layout, edges, cfg, lengths, &improve_stats);
    require_planar(layout, edges, "improve at level " + std::to_string(level));
    layout = orient_compact(layout, edges, boxes);
    layout = remove_overlaps(layout, edges, boxes, cfg, lengths, &overlap_stats);
    require_planar(layout, edges, "overlap removal at level " + std::to_string(level));
    if (const auto overlaps = rect_overlap_count(layout, boxes); overlaps != 0)
      throw Error(ErrorCode::InvariantViolation,
                  "level " + std::to_string(level) + " keeps " + std::to_string(overlaps) + " label overlap(s)");
    if (stats != nullptr) {
      stats->improve.push_back(improve_stats);
      stats->overlap.push_back(overlap_stats);
    }
    if (on_stage) on_stage(level, layout);
    if (level == n) break;

    const auto forest = level_forest(g, h, level);
    AugmentStats augment_stats;
    layout = augment(layout, edges, forest, desired_length_for_level(level + 1, cfg), g.id_rank(),
                     &augment_stats);
    if (stats != nullptr) stats->augment.push_back(augment_stats);
    edges = h.tree_pairs(g, level + 1);
    require_planar(layout, edges, "augment at level " + std::to_string(level + 1));
  }
  return layout;
}

Layout orient_compact(const Layout& layout, std::span<const NodePair> edges, std::span<const LabelBox> boxes) {
  if (layout.size() < 2) return layout;
  const auto nodes = layout.nodes();
  const Point center = layout.centroid();

  std::vector<double> angles;
  for (int degree = 1; degree < 180; ++degree) angles.push_back(degree * std::numbers::pi / 180.0);
  std::vector<Point> points;
  for (NodeIndex v : nodes) points.push_back(layout[v]);
  std::sort(points.begin(), points.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  std::vector<Point> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const Point& p : points) {
      while (hull.size() >= base + 2 && cross(hull.back() - hull[hull.size() - 2], p - hull[hull.size() - 2]) <= 0.0)
        hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(points.begin(), points.end());
  }
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const Point d = hull[(k + 1) % hull.size()] - hull[k];
    if (norm(d) > 0.0) angles.push_back(-std::atan2(d.y, d.x));
  }

  auto area_at = [&](double angle) {
    double lo_x = kInfinity, lo_y = kInfinity, hi_x = -kInfinity, hi_y = -kInfinity;
    for (NodeIndex v : nodes) {
      const Point p = rotate(layout[v] - center, angle);
      lo_x = std::min(lo_x, p.x - boxes[v].half_width());
      hi_x = std::max(hi_x, p.x + boxes[v].half_width());
      lo_y = std::min(lo_y, p.y - boxes[v].half_height());
      hi_y = std::max(hi_y, p.y + boxes[v].half_height());
    }
    return (hi_x - lo_x) * (hi_y - lo_y);
  };
  const double current = area_at(0.0);
  std::vector<std::pair<double, double>> ranked;
  for (double a : angles)
    if (const double area = area_at(a); area < current * (1.0 - 1e-9)) ranked.push_back({area, a});
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  const std::size_t crossings = count_crossings(layout, edges);
  for (const auto& [area, angle] : ranked) {
    Layout turned(layout.capacity());
    for (NodeIndex v : nodes) turned.set(v, center + rotate(layout[v] - center, angle));
    if (count_crossings(turned, edges) == crossings) return turned;
  }
  return layout;
}

std::vector<Layout> extract_levels(const Layout& final_layout, const LevelHierarchy& h) {
  std::vector<Layout> out;
  out.reserve(h.tree_nodes.size());
  for (const auto& nodes : h.tree_nodes) out.push_back(final_layout.restricted_to(nodes));
  return out;
}

GraphDrawing full_graph_layout(const Layout& final_layout, const WeightedGraph& g) {
  GraphDrawing out{final_layout, {}};
  for (const auto& e : g.edges()) {
    if (!final_layout.has(e.ends.u) || !final_layout.has(e.ends.v)) continue;
    out.edges.push_back(e.ends);
  }
  return out;
}

double mean_first_level_label_width(const LevelHierarchy& h, std::span<const LabelBox> boxes) {
  if (h.levels() == 0) throw Error(ErrorCode::EmptyLevel, "hierarchy has no levels");
  const auto& nodes = h.tree_nodes[0];
  if (nodes.empty()) throw Error(ErrorCode::EmptyLevel, "level 1 has no nodes");
  double sum = 0.0;
  for (NodeIndex v : nodes) {
    if (v >= boxes.size()) throw Error(ErrorCode::BadConfig, "missing label box for node " + std::to_string(v));
    sum += boxes[v].width;
  }
  return sum / static_cast<double>(nodes.size());
}

Layout baseline_scale_layout(const WeightedGraph& g, const LevelHierarchy& h,
                             std::span<const LabelBox> boxes, const ForceConfig& cfg) {
  cfg.validate();
  const int n = h.levels();
  const auto edges = h.tree_pairs(g, n);
  Layout layout =
      initial_layout(h.tree_nodes[n - 1], edges, g.node_count(), cfg.base_edge_length, g.id_rank());
  layout.scale_about(layout.centroid(), minimal_separating_scale(layout, boxes));
  while (rect_overlap_count(layout, boxes) > 0) layout.scale_about(layout.centroid(), 1.0 + 1e-9);
  return layout;
}

double minimal_separating_scale(const Layout& layout, std::span<const LabelBox> boxes) {
  const auto nodes = layout.nodes();
  double scale = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Point p = layout[nodes[i]];
    const LabelBox& a = boxes[nodes[i]];
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const Point q = layout[nodes[j]];
      const LabelBox& b = boxes[nodes[j]];
      const double dx = std::abs(p.x - q.x), dy = std::abs(p.y - q.y);
      if (dx == 0.0 && dy == 0.0) throw Error(ErrorCode::DegenerateLayout, "two nodes share a position");
      // The pair overlaps exactly while scale * dx < w and scale * dy < h.
      const double sx = dx > 0.0 ? (a.half_width() + b.half_width()) / dx : kInfinity;
      const double sy = dy > 0.0 ? (a.half_height() + b.half_height()) / dy : kInfinity;
      scale = std::max(scale, std::min(sx, sy));
    }
  }
  return scale > 0.0 ? scale * (1.0 + 1e-12) : 1.0;
}

}  // namespace zmlt
