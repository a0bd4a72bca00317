#include "zmlt/layout.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace zmlt {

Point Layout::at(NodeIndex v) const {
  if (!has(v)) throw Error(ErrorCode::MissingPosition, "node #" + std::to_string(v) + " has no position");
  return pos_[v];
}

void Layout::set(NodeIndex v, Point p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw Error(ErrorCode::DegenerateLayout, "non-finite position for node #" + std::to_string(v));
  if (v >= pos_.size()) {
    pos_.resize(v + 1);
    placed_.resize(v + 1, 0);
  }
  if (!placed_[v]) ++count_;
  placed_[v] = 1;
  pos_[v] = p;
}

void Layout::erase(NodeIndex v) {
  if (!has(v)) return;
  placed_[v] = 0;
  pos_[v] = {};
  --count_;
}

std::vector<NodeIndex> Layout::nodes() const {
  std::vector<NodeIndex> out;
  out.reserve(count_);
  for (NodeIndex v = 0; v < placed_.size(); ++v)
    if (placed_[v]) out.push_back(v);
  return out;
}

Layout Layout::restricted_to(std::span<const NodeIndex> keep) const {
  Layout out(capacity());
  for (NodeIndex v : keep) out.set(v, at(v));
  return out;
}

void Layout::require_positions(std::span<const NodePair> edges) const {
  for (const auto& e : edges) {
    (void)at(e.u);
    (void)at(e.v);
  }
}

void Layout::translate(Point offset) {
  for (NodeIndex v = 0; v < placed_.size(); ++v)
    if (placed_[v]) pos_[v] += offset;
}

void Layout::scale_about(Point center, double factor) {
  for (NodeIndex v = 0; v < placed_.size(); ++v)
    if (placed_[v]) pos_[v] = center + (pos_[v] - center) * factor;
}

Point Layout::centroid() const {
  Point sum;
  for (NodeIndex v = 0; v < placed_.size(); ++v)
    if (placed_[v]) sum += pos_[v];
  if (count_ == 0) return sum;
  return sum * (1.0 / static_cast<double>(count_));
}

bool operator==(const Layout& a, const Layout& b) {
  if (a.count_ != b.count_) return false;
  const std::size_t n = std::max(a.placed_.size(), b.placed_.size());
  for (NodeIndex v = 0; v < n; ++v) {
    if (a.has(v) != b.has(v)) return false;
    if (a.has(v) && !(a.pos_[v] == b.pos_[v])) return false;
  }
  return true;
}

Bounds point_bounds(const Layout& layout) {
  if (layout.empty()) throw Error(ErrorCode::EmptyLayout, "layout has no positioned nodes");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds b{inf, inf, -inf, -inf};
  for (NodeIndex v : layout.nodes()) {
    const Point p = layout[v];
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

Bounds label_bounds(const Layout& layout, std::span<const LabelBox> boxes) {
  if (layout.empty()) throw Error(ErrorCode::EmptyLayout, "layout has no positioned nodes");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds b{inf, inf, -inf, -inf};
  for (NodeIndex v : layout.nodes()) {
    const Point p = layout[v];
    const LabelBox& box = boxes[v];
    b.min_x = std::min(b.min_x, p.x - box.half_width());
    b.min_y = std::min(b.min_y, p.y - box.half_height());
    b.max_x = std::max(b.max_x, p.x + box.half_width());
    b.max_y = std::max(b.max_y, p.y + box.half_height());
  }
  return b;
}

}  // namespace zmlt
