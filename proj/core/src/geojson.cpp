#include "zmlt/geojson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace zmlt {

namespace {

constexpr int kMovePasses = 20;
constexpr double kGainEpsilon = 1e-12;

nlohmann::json coordinates(Point p) { return nlohmann::json::array({p.x, p.y}); }

/// Renumbers communities by the order in which `order` first meets them.
std::vector<std::vector<NodeIndex>> group(std::span<const std::size_t> community,
                                          std::span<const NodeIndex> order) {
  std::map<std::size_t, std::size_t> renumber;
  for (NodeIndex v : order) renumber.emplace(community[v], renumber.size());
  std::vector<std::vector<NodeIndex>> out(renumber.size());
  for (NodeIndex v = 0; v < community.size(); ++v) out[renumber.at(community[v])].push_back(v);
  return out;
}

}  // namespace

MapTransform fit_transform(const Bounds& bounds) {
  MapTransform t;
  t.center = {0.5 * (bounds.min_x + bounds.max_x), 0.5 * (bounds.min_y + bounds.max_y)};
  const double sx = bounds.width() > 0.0 ? 2.0 * kMaxLongitude / bounds.width() : 0.0;
  const double sy = bounds.height() > 0.0 ? 2.0 * kMaxLatitude / bounds.height() : 0.0;
  if (sx > 0.0 && sy > 0.0) t.scale = std::min(sx, sy);
  else if (sx > 0.0 || sy > 0.0) t.scale = std::max(sx, sy);
  return t;
}

double modularity(const WeightedGraph& g, std::span<const std::size_t> cluster_of) {
  double total = 0.0;
  for (const auto& e : g.edges()) total += e.weight;
  if (total <= 0.0) return 0.0;
  std::map<std::size_t, double> inside, degree;
  for (const auto& e : g.edges()) {
    degree[cluster_of[e.ends.u]] += e.weight;
    degree[cluster_of[e.ends.v]] += e.weight;
    if (cluster_of[e.ends.u] == cluster_of[e.ends.v]) inside[cluster_of[e.ends.u]] += e.weight;
  }
  double q = 0.0;
  for (const auto& [c, d] : degree) {
    const double in = inside.contains(c) ? inside.at(c) : 0.0;
    q += in / total - (d / (2.0 * total)) * (d / (2.0 * total));
  }
  return q;
}

std::vector<std::vector<NodeIndex>> modularity_clusters(const WeightedGraph& g, std::size_t k_hint) {
  const std::size_t n = g.node_count();
  const auto order = g.importance_order();
  std::vector<std::size_t> community(n);
  std::iota(community.begin(), community.end(), std::size_t{0});
  std::vector<double> strength(n, 0.0);
  double total = 0.0;
  for (const auto& e : g.edges()) {
    strength[e.ends.u] += e.weight;
    strength[e.ends.v] += e.weight;
    total += e.weight;
  }
  if (total <= 0.0) return group(community, order);
  std::vector<double> community_strength = strength;
  const double two_m = 2.0 * total;

  for (int pass = 0; pass < kMovePasses; ++pass) {
    bool moved = false;
    for (NodeIndex v : order) {
      const std::size_t own = community[v];
      std::map<std::size_t, double> links;
      for (const auto& inc : g.neighbors(v))
        if (inc.neighbor != v) links[community[inc.neighbor]] += g.edge(inc.edge).weight;
      community_strength[own] -= strength[v];
      // Gain of joining c, up to a common positive factor.
      auto gain = [&](std::size_t c) {
        const double k_in = links.contains(c) ? links.at(c) : 0.0;
        return k_in - strength[v] * community_strength[c] / two_m;
      };
      std::size_t best = own;
      double best_gain = gain(own);
      for (const auto& [c, w] : links) {
        const double gc = gain(c);
        if (gc > best_gain + kGainEpsilon) {
          best = c;
          best_gain = gc;
        }
      }
      community_strength[best] += strength[v];
      if (best != own) {
        community[v] = best;
        moved = true;
      }
    }
    if (!moved) break;
  }

  auto clusters = group(community, order);
  if (k_hint == 0 || clusters.size() <= k_hint) return clusters;

  // Agglomerate: repeatedly merge the linked pair with the best modularity gain.
  std::vector<std::size_t> cluster_of(n);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (NodeIndex v : clusters[c]) cluster_of[v] = c;
  std::vector<double> deg(clusters.size(), 0.0);
  for (NodeIndex v = 0; v < n; ++v) deg[cluster_of[v]] += strength[v];
  std::size_t live = clusters.size();
  while (live > k_hint) {
    std::map<std::pair<std::size_t, std::size_t>, double> between;
    for (const auto& e : g.edges()) {
      auto a = cluster_of[e.ends.u], b = cluster_of[e.ends.v];
      if (a == b) continue;
      between[{std::min(a, b), std::max(a, b)}] += e.weight;
    }
    if (between.empty()) break;
    std::pair<std::size_t, std::size_t> pick{};
    double pick_gain = -std::numeric_limits<double>::infinity();
    for (const auto& [ab, w] : between) {
      const double dq = w / total - 2.0 * deg[ab.first] * deg[ab.second] / (two_m * two_m);
      if (dq > pick_gain + kGainEpsilon) {
        pick = ab;
        pick_gain = dq;
      }
    }
    for (auto& c : cluster_of)
      if (c == pick.second) c = pick.first;
    deg[pick.first] += deg[pick.second];
    deg[pick.second] = 0.0;
    --live;
  }
  return group(cluster_of, order);
}

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(),
            [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  points.erase(std::unique(points.begin(), points.end(),
                           [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
               points.end());
  if (points.size() < 3) return points;
  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Cluster> cluster_regions(const Layout& final_layout, const WeightedGraph& g,
                                     std::span<const LabelBox> boxes, std::size_t k_hint) {
  std::vector<Cluster> out;
  for (auto& members : modularity_clusters(g, k_hint)) {
    double hw = 0.0, hh = 0.0;
    std::vector<Point> corners;
    for (NodeIndex v : members) {
      hw = std::max(hw, boxes[v].half_width());
      hh = std::max(hh, boxes[v].half_height());
    }
    // Minkowski sum of the member points with the padding rectangle.
    for (NodeIndex v : members) {
      const Point p = final_layout.at(v);
      for (Point d : {Point{-hw, -hh}, Point{hw, -hh}, Point{hw, hh}, Point{-hw, hh}}) corners.push_back(p + d);
    }
    Cluster c{std::move(members), convex_hull(std::move(corners))};
    if (!c.ring.empty()) c.ring.push_back(c.ring.front());
    out.push_back(std::move(c));
  }
  return out;
}

MapLayers to_geojson(const Layout& final_layout, const LevelHierarchy& h, std::span<const LabelBox> boxes,
                     const WeightedGraph& g, const ExportOptions& options) {
  if (final_layout.empty()) throw Error(ErrorCode::EmptyLayout, "nothing to export");
  if (boxes.size() != g.node_count()) throw Error(ErrorCode::WrongLength, "one label box per node is required");
  const auto node_level = h.node_entry_level();
  const auto edge_level = h.edge_entry_level(g.edge_count());
  const auto clusters = cluster_regions(final_layout, g, boxes, options.k_hint);

  // Fit everything that is drawn, padded rings included.
  Bounds bounds = label_bounds(final_layout, boxes);
  for (const auto& c : clusters)
    for (const Point& p : c.ring) {
      bounds.min_x = std::min(bounds.min_x, p.x);
      bounds.max_x = std::max(bounds.max_x, p.x);
      bounds.min_y = std::min(bounds.min_y, p.y);
      bounds.max_y = std::max(bounds.max_y, p.y);
    }
  const MapTransform t = fit_transform(bounds);

  auto collection = [] { return nlohmann::json{{"type", "FeatureCollection"}, {"features", nlohmann::json::array()}}; };
  MapLayers layers{collection(), collection(), collection()};

  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const auto& rec = g.node(v);
    layers.nodes["features"].push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Point"}, {"coordinates", coordinates(t.apply(final_layout.at(v)))}}},
         {"properties",
          {{"id", rec.id},
           {"label", rec.label},
           {"weight", rec.weight},
           {"level", node_level[v]},
           {"font_size", boxes[v].font_size},
           {"font_name", options.font_name},
           {"width", boxes[v].width},
           {"height", boxes[v].height}}}});
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (edge_level[e] == 0) continue;
    const auto& edge = g.edge(e);
    layers.edges["features"].push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "LineString"},
           {"coordinates",
            {coordinates(t.apply(final_layout.at(edge.ends.u))), coordinates(t.apply(final_layout.at(edge.ends.v)))}}}},
         {"properties",
          {{"source", g.node(edge.ends.u).id},
           {"target", g.node(edge.ends.v).id},
           {"weight", edge.weight},
           {"level", edge_level[e]}}}});
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    nlohmann::json ring = nlohmann::json::array();
    for (const Point& p : clusters[c].ring) ring.push_back(coordinates(t.apply(p)));
    nlohmann::json members = nlohmann::json::array();
    for (NodeIndex v : clusters[c].members) members.push_back(g.node(v).id);
    layers.clusters["features"].push_back({{"type", "Feature"},
                                           {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}},
                                           {"properties", {{"cluster_id", c}, {"members", members}}}});
  }
  return layers;
}

}  // namespace zmlt
