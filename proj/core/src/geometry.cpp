#include "zmlt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace zmlt {

namespace {

bool incident(const Segment& a, const Segment& b) noexcept {
  if (a.edge.u != kNoNode && b.edge.u != kNoNode)
    return a.edge.u == b.edge.u || a.edge.u == b.edge.v || a.edge.v == b.edge.u ||
           a.edge.v == b.edge.v;
  return a.p == b.p || a.p == b.q || a.q == b.p || a.q == b.q;
}

// c is collinear with [a, b]; is it within the segment's extent?
bool on_segment(Point a, Point b, Point c) noexcept {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

struct Extent {
  double min_x, max_x, min_y, max_y;
};

Extent extent_of(const Segment& s) noexcept {
  return {std::min(s.p.x, s.q.x), std::max(s.p.x, s.q.x), std::min(s.p.y, s.q.y),
          std::max(s.p.y, s.q.y)};
}

// Generic sort-and-sweep over x-extents. `test(i, j)` is called for every
// pair whose closed extents overlap; the count of true results is returned.
template <class ExtentFn, class TestFn>
std::size_t sweep_pairs(std::size_t n, ExtentFn extent, TestFn test) {
  std::vector<Extent> ext(n);
  for (std::size_t i = 0; i < n; ++i) ext[i] = extent(i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ext[a].min_x != ext[b].min_x) return ext[a].min_x < ext[b].min_x;
    return a < b;
  });

  std::size_t count = 0;
  std::vector<std::size_t> active;
  for (std::size_t i : order) {
    const Extent& e = ext[i];
    std::erase_if(active, [&](std::size_t j) { return ext[j].max_x < e.min_x; });
    for (std::size_t j : active) {
      if (ext[j].max_y < e.min_y || e.max_y < ext[j].min_y) continue;
      if (test(j, i)) ++count;
    }
    active.push_back(i);
  }
  return count;
}

}  // namespace

int orientation(Point a, Point b, Point c) noexcept {
  const double v = cross(b - a, c - a);
  if (v > kOrientationEpsilon) return 1;
  if (v < -kOrientationEpsilon) return -1;
  return 0;
}

bool segments_cross(const Segment& s1, const Segment& s2) noexcept {
  if (incident(s1, s2)) return false;
  const int o1 = orientation(s1.p, s1.q, s2.p);
  const int o2 = orientation(s1.p, s1.q, s2.q);
  const int o3 = orientation(s2.p, s2.q, s1.p);
  const int o4 = orientation(s2.p, s2.q, s1.q);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(s1.p, s1.q, s2.p)) return true;
  if (o2 == 0 && on_segment(s1.p, s1.q, s2.q)) return true;
  if (o3 == 0 && on_segment(s2.p, s2.q, s1.p)) return true;
  if (o4 == 0 && on_segment(s2.p, s2.q, s1.q)) return true;
  return false;
}

Segment make_segment(const Layout& layout, NodePair edge) {
  return {layout.at(edge.u), layout.at(edge.v), edge};
}

std::size_t count_crossings_naive(const Layout& layout, std::span<const NodePair> edges) {
  std::vector<Segment> segs;
  segs.reserve(edges.size());
  for (const auto& e : edges) segs.push_back(make_segment(layout, e));
  std::size_t count = 0;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (segments_cross(segs[i], segs[j])) ++count;
  return count;
}

std::size_t count_crossings(const Layout& layout, std::span<const NodePair> edges) {
  std::vector<Segment> segs;
  segs.reserve(edges.size());
  for (const auto& e : edges) segs.push_back(make_segment(layout, e));
  return sweep_pairs(
      segs.size(), [&](std::size_t i) { return extent_of(segs[i]); },
      [&](std::size_t a, std::size_t b) { return segments_cross(segs[a], segs[b]); });
}

bool crosses_any(const Segment& candidate, std::span<const Segment> others) noexcept {
  const Extent c = extent_of(candidate);
  for (const auto& s : others) {
    const Extent e = extent_of(s);
    if (e.max_x < c.min_x || c.max_x < e.min_x || e.max_y < c.min_y || c.max_y < e.min_y) continue;
    if (segments_cross(candidate, s)) return true;
  }
  return false;
}

std::vector<PlacedBox> place_boxes(const Layout& layout, std::span<const LabelBox> boxes) {
  std::vector<PlacedBox> out;
  out.reserve(layout.size());
  for (NodeIndex v : layout.nodes())
    out.push_back({layout[v], boxes[v].half_width(), boxes[v].half_height()});
  return out;
}

std::size_t rect_overlap_count_naive(std::span<const PlacedBox> boxes) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (boxes_overlap(boxes[i], boxes[j])) ++count;
  return count;
}

std::size_t rect_overlap_count(std::span<const PlacedBox> boxes) {
  return sweep_pairs(
      boxes.size(),
      [&](std::size_t i) {
        const auto& b = boxes[i];
        return Extent{b.center.x - b.half_width, b.center.x + b.half_width,
                      b.center.y - b.half_height, b.center.y + b.half_height};
      },
      [&](std::size_t a, std::size_t b) { return boxes_overlap(boxes[a], boxes[b]); });
}

std::size_t rect_overlap_count(const Layout& layout, std::span<const LabelBox> boxes) {
  const auto placed = place_boxes(layout, boxes);
  return rect_overlap_count(placed);
}

double normalize_angle(double angle) noexcept {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

bool Cone::contains_direction(double angle) const noexcept {
  const double rel = normalize_angle(angle - start_angle);
  if (width >= kTwoPi) return true;
  return rel > 0.0 && rel < width;
}

std::vector<Cone> cones_around(const Layout& layout, std::span<const NodePair> tree, NodeIndex v) {
  const Point apex = layout.at(v);
  std::vector<double> angles;
  for (const auto& e : tree) {
    if (e.u != v && e.v != v) continue;
    const Point d = layout.at(e.u == v ? e.v : e.u) - apex;
    angles.push_back(normalize_angle(std::atan2(d.y, d.x)));
  }
  if (angles.size() <= 1) {
    return {Cone{apex, angles.empty() ? 0.0 : angles.front(), kTwoPi}};
  }
  std::sort(angles.begin(), angles.end());
  std::vector<Cone> cones;
  cones.reserve(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double next = i + 1 < angles.size() ? angles[i + 1] : angles.front() + kTwoPi;
    cones.push_back({apex, angles[i], next - angles[i]});
  }
  return cones;
}

bool is_monotone_path(std::span<const Point> points) {
  if (points.size() < 2) return true;
  std::vector<double> angles;
  angles.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Point d = points[i + 1] - points[i];
    if (d.x == 0.0 && d.y == 0.0) return false;
    angles.push_back(normalize_angle(std::atan2(d.y, d.x)));
  }
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + kTwoPi - angles.back();
  for (std::size_t i = 0; i + 1 < angles.size(); ++i)
    max_gap = std::max(max_gap, angles[i + 1] - angles[i]);
  // Directions fit in an open half-plane iff their angular span is below pi.
  return kTwoPi - max_gap < std::numbers::pi - 1e-12;
}

double point_segment_distance(Point p, Point a, Point b, Point* closest) noexcept {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  const Point c = a + ab * t;
  if (closest != nullptr) *closest = c;
  return distance(p, c);
}

double clearance_radius(const Layout& layout, std::span<const NodePair> edges, NodeIndex v,
                        double max_radius) {
  const Point p = layout.at(v);
  std::vector<NodeIndex> adjacent;
  for (const auto& e : edges) {
    if (e.u == v) adjacent.push_back(e.v);
    if (e.v == v) adjacent.push_back(e.u);
  }
  std::sort(adjacent.begin(), adjacent.end());
  double nearest = std::numeric_limits<double>::infinity();
  for (NodeIndex w : layout.nodes()) {
    if (w == v) continue;
    const double d = distance(p, layout[w]);
    if (d == 0.0)
      throw Error(ErrorCode::DegenerateLayout,
                  "node #" + std::to_string(w) + " coincides with node #" + std::to_string(v));
    if (!std::binary_search(adjacent.begin(), adjacent.end(), w)) nearest = std::min(nearest, d);
  }
  for (const auto& e : edges) {
    if (e.u == v || e.v == v) continue;
    const double d = point_segment_distance(p, layout.at(e.u), layout.at(e.v));
    if (d == 0.0)
      throw Error(ErrorCode::DegenerateLayout, "node #" + std::to_string(v) + " lies on an edge");
    nearest = std::min(nearest, d);
  }
  if (!std::isfinite(nearest)) return max_radius;
  return std::min(max_radius, 0.5 * nearest);
}

}  // namespace zmlt
