#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zmlt/graph.hpp"

namespace zmlt {

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point& operator+=(Point o) noexcept { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) noexcept { x -= o.x; y -= o.y; return *this; }
  Point& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

  friend Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(Point a, double s) noexcept { return {a.x * s, a.y * s}; }
  friend Point operator*(double s, Point a) noexcept { return {a.x * s, a.y * s}; }
  friend bool operator==(Point, Point) = default;
};

inline double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) noexcept { return norm(a - b); }
inline Point rotate(Point a, double angle) noexcept {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

/// Positions for a subset of a graph's nodes, addressed by NodeIndex.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::size_t capacity) : pos_(capacity), placed_(capacity, 0) {}

  std::size_t capacity() const noexcept { return pos_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool has(NodeIndex v) const noexcept { return v < placed_.size() && placed_[v] != 0; }
  Point at(NodeIndex v) const;  // throws MissingPosition
  Point operator[](NodeIndex v) const noexcept { return pos_[v]; }

  void set(NodeIndex v, Point p);
  void erase(NodeIndex v);

  /// Placed nodes in ascending index order.
  std::vector<NodeIndex> nodes() const;

  /// Copy holding only the listed nodes (which must be placed).
  Layout restricted_to(std::span<const NodeIndex> keep) const;

  /// Throws MissingPosition unless every endpoint of `edges` is placed.
  void require_positions(std::span<const NodePair> edges) const;

  void translate(Point offset);
  /// Scales every position by `factor` about `center`.
  void scale_about(Point center, double factor);
  Point centroid() const;

  friend bool operator==(const Layout&, const Layout&);

 private:
  std::vector<Point> pos_;
  std::vector<std::uint8_t> placed_;
  std::size_t count_ = 0;
};

/// Axis-aligned bounding rectangle.
struct Bounds {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  double width() const noexcept { return max_x - min_x; }
  double height() const noexcept { return max_y - min_y; }
};

/// Bounds of the placed node centres. Throws EmptyLayout when nothing is placed.
Bounds point_bounds(const Layout& layout);

/// Bounds of the label rectangles of the placed nodes.
Bounds label_bounds(const Layout& layout, std::span<const LabelBox> boxes);

}  // namespace zmlt
