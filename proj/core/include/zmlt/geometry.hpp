#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "zmlt/graph.hpp"
#include "zmlt/layout.hpp"

namespace zmlt {

/// Absolute tolerance on orientation cross products.
inline constexpr double kOrientationEpsilon = 1e-12;

/// Default cap for clearance_radius() when nothing non-incident is nearby.
inline constexpr double kMaxClearanceRadius = 1e12;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A drawn straight-line edge. `edge` is {kNoNode, kNoNode} for free segments.
struct Segment {
  Point p;
  Point q;
  NodePair edge{};
};

/// Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear (within epsilon).
int orientation(Point a, Point b, Point c) noexcept;

/// True iff the closed segments intersect and are not incident.
///
/// Segments that share a node (or, for free segments, an endpoint coordinate)
/// never cross. Touching and collinear overlap of non-incident segments count.
bool segments_cross(const Segment& s1, const Segment& s2) noexcept;

Segment make_segment(const Layout& layout, NodePair edge);

/// Pairwise O(m^2) reference count of crossing edge pairs.
std::size_t count_crossings_naive(const Layout& layout, std::span<const NodePair> edges);

/// Sort-and-sweep count over x-extents; always equals count_crossings_naive().
std::size_t count_crossings(const Layout& layout, std::span<const NodePair> edges);

/// True iff `candidate` crosses any of `others`.
bool crosses_any(const Segment& candidate, std::span<const Segment> others) noexcept;

/// Label rectangle positioned in the plane.
struct PlacedBox {
  Point center;
  double half_width = 0.0;
  double half_height = 0.0;
};

/// Positive-area intersection test; touching boundaries do not overlap.
inline bool boxes_overlap(const PlacedBox& a, const PlacedBox& b) noexcept {
  return a.half_width + b.half_width - std::abs(a.center.x - b.center.x) > 0.0 &&
         a.half_height + b.half_height - std::abs(a.center.y - b.center.y) > 0.0;
}

std::vector<PlacedBox> place_boxes(const Layout& layout, std::span<const LabelBox> boxes);

std::size_t rect_overlap_count_naive(std::span<const PlacedBox> boxes);
std::size_t rect_overlap_count(std::span<const PlacedBox> boxes);
/// Overlaps among the label boxes of every node placed in `layout`.
std::size_t rect_overlap_count(const Layout& layout, std::span<const LabelBox> boxes);

/// Angular region at `apex` from start_angle sweeping counter-clockwise by width.
struct Cone {
  Point apex;
  double start_angle = 0.0;
  double width = kTwoPi;

  double end_angle() const noexcept { return start_angle + width; }
  double bisector() const noexcept { return start_angle + 0.5 * width; }
  /// Whether direction `angle` lies strictly inside the cone.
  bool contains_direction(double angle) const noexcept;
};

/// Normalizes an angle to [0, 2*pi).
double normalize_angle(double angle) noexcept;

/// Cones between consecutive incident edges of v, counter-clockwise from the
/// smallest edge angle. Degree <= 1 yields one full-circle cone.
std::vector<Cone> cones_around(const Layout& layout, std::span<const NodePair> tree, NodeIndex v);

/// True iff some direction has positive dot product with every step of the path.
bool is_monotone_path(std::span<const Point> points);

/// Distance from p to segment [a, b]; writes the closest point when asked.
double point_segment_distance(Point p, Point a, Point b, Point* closest = nullptr) noexcept;

/// Half the distance from v to the nearest non-incident edge of `edges` or
/// placed node other than v and its neighbours; max_radius when there is none.
/// A neighbour at distance zero still counts as degenerate.
///
/// Throws DegenerateLayout when another node or edge touches v.
double clearance_radius(const Layout& layout, std::span<const NodePair> edges, NodeIndex v,
                        double max_radius = kMaxClearanceRadius);

}  // namespace zmlt
