#include "zmlt/force_layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "parallel.hpp"
#include "zmlt/geometry.hpp"

namespace zmlt {

namespace {

constexpr int kSectors = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScaleStep = 1.25;
constexpr int kMaxScaleSteps = 400;
// Label repulsion acts within this fraction beyond the box extents, so pairs
// settle slightly apart instead of hovering on the touching boundary.
constexpr double kLabelMargin = 0.1;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic unit direction for an unordered node pair.
Point pair_direction(std::uint64_t seed, NodeIndex a, NodeIndex b, int attempt = 0) noexcept {
  const auto lo = std::min(a, b), hi = std::max(a, b);
  const std::uint64_t h =
      splitmix64(seed ^ splitmix64((std::uint64_t{lo} << 32) | hi) ^ static_cast<std::uint64_t>(attempt));
  const double angle = static_cast<double>(h >> 11) * (kTwoPi / 9007199254740992.0);
  return {std::cos(angle), std::sin(angle)};
}

// Distance from p to the bounding box of segment [a, b]; a lower bound on
// the distance to the segment itself.
double box_distance(Point p, Point a, Point b) noexcept {
  const double dx = std::max({std::min(a.x, b.x) - p.x, 0.0, p.x - std::max(a.x, b.x)});
  const double dy = std::max({std::min(a.y, b.y) - p.y, 0.0, p.y - std::max(a.y, b.y)});
  return std::hypot(dx, dy);
}

// Per-sector movement limits of one node.
struct Zones {
  std::array<double, kSectors> limit;

  Zones() { limit.fill(kInf); }

  // Movement with a positive component along `toward` must stay below bound.
  // Sectors three or more steps away from toward's sector only contain
  // directions at least 90 degrees from it.
  void clamp_toward(Point toward, double bound) noexcept {
    const int s = direction_sector(toward);
    for (int k = -2; k <= 2; ++k) {
      double& slot = limit[static_cast<std::size_t>((s + k + kSectors) % kSectors)];
      slot = std::min(slot, bound);
    }
  }
  void freeze() noexcept { limit.fill(0.0); }
};

class ForceEngine {
 public:
  ForceEngine(const Layout& layout, std::span<const NodePair> edges, const ForceConfig& cfg,
              const DesiredLengths& lengths, std::span<const LabelBox> boxes)
      : cfg_(cfg), capacity_(layout.capacity()) {
    if (lengths.size() != edges.size())
      throw Error(ErrorCode::WrongLength, "desired lengths must match the edge list");
    layout.require_positions(edges);
    ids_ = layout.nodes();
    std::vector<std::uint32_t> local(layout.capacity(), 0);
    for (std::uint32_t i = 0; i < ids_.size(); ++i) local[ids_[i]] = i;
    pos_.reserve(ids_.size());
    for (NodeIndex v : ids_) pos_.push_back(layout[v]);

    incident_.resize(ids_.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::uint32_t a = local[edges[e].u], b = local[edges[e].v];
      edges_.push_back({a, b, lengths[e]});
      incident_[a].push_back({b, static_cast<std::uint32_t>(e)});
      incident_[b].push_back({a, static_cast<std::uint32_t>(e)});
    }
    neighbors_.resize(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      for (const auto& inc : incident_[i]) neighbors_[i].push_back(inc.first);
      std::sort(neighbors_[i].begin(), neighbors_[i].end());
    }

    if (!boxes.empty()) {
      half_.reserve(ids_.size());
      for (NodeIndex v : ids_) half_.push_back({boxes[v].half_width(), boxes[v].half_height()});
    }
    const double ideal = lengths.size() > 0 ? lengths.mean() : cfg.base_edge_length;
    repulsion_ = cfg.repulsion * ideal * ideal;
    disp_.resize(ids_.size());
    excess_.resize(ids_.size());
  }

  // One synchronous iteration; returns the largest displacement applied.
  double iterate(double step, ForceStats* stats) {
    const double cutoff = std::max(cfg_.node_edge_margin, cfg_.safety_divisor * step) * (1.0 + 1e-9);
    detail::parallel_for(ids_.size(), [&](std::size_t i) { node_step(i, step, cutoff); });
    double largest = 0.0;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      pos_[i] += disp_[i];
      largest = std::max(largest, norm(disp_[i]));
      if (stats != nullptr) stats->max_zone_excess = std::max(stats->max_zone_excess, excess_[i]);
    }
    if (stats != nullptr) {
      ++stats->iterations_run;
      stats->max_displacement = std::max(stats->max_displacement, largest);
    }
    return largest;
  }

  std::size_t overlap_count() const {
    std::vector<PlacedBox> placed;
    placed.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) placed.push_back({pos_[i], half_[i][0], half_[i][1]});
    return rect_overlap_count(placed);
  }

  Layout result() const {
    Layout out(capacity_);
    for (std::size_t i = 0; i < ids_.size(); ++i) out.set(ids_[i], pos_[i]);
    return out;
  }

 private:
  struct LocalEdge {
    std::uint32_t a, b;
    double length;
  };

  // Centre distance at which the two labels touch along direction d.
  double touching_distance(std::size_t i, std::size_t j, Point d, double dist) const noexcept {
    const double cx = std::abs(d.x) / dist, cy = std::abs(d.y) / dist;
    const double tx = cx > 0.0 ? (half_[i][0] + half_[j][0]) / cx : kInf;
    const double ty = cy > 0.0 ? (half_[i][1] + half_[j][1]) / cy : kInf;
    return std::min(tx, ty);
  }

  void node_step(std::size_t i, double step, double cutoff) {
    const Point p = pos_[i];
    const double sigma = cfg_.safety_divisor;
    Point force;
    Zones zones;

    // Node-to-node repulsion between non-adjacent pairs.
    const auto& nbrs = neighbors_[i];
    std::size_t k = 0;
    for (std::size_t j = 0; j < pos_.size(); ++j) {
      while (k < nbrs.size() && nbrs[k] < j) ++k;
      if (j == i || (k < nbrs.size() && nbrs[k] == j)) continue;
      const Point d = p - pos_[j];
      const double dist2 = dot(d, d);
      if (dist2 > 0.0) force += d * (repulsion_ / dist2);
    }

    // Edge attraction toward the desired length; adjacent nodes may not meet.
    // With labels, an edge never pulls its endpoints' labels into each other.
    for (const auto& [nb, e] : incident_[i]) {
      const Point d = pos_[nb] - p;
      const double dist = norm(d);
      if (dist == 0.0) continue;
      double len = edges_[e].length;
      if (!half_.empty()) len = std::max(len, (1.0 + kLabelMargin) * touching_distance(i, nb, d, dist));
      double pull = dist * dist / len - len;
      // While labels are being separated, one label push can outweigh one edge.
      if (!half_.empty()) pull = std::min(pull, cfg_.delta);
      force += d * (pull / dist);
      zones.clamp_toward(d, dist / sigma);
    }

    // Label-to-label repulsion along the line through the centres.
    if (!half_.empty()) {
      for (std::size_t j = 0; j < pos_.size(); ++j) {
        if (j == i) continue;
        const Point d = p - pos_[j];
        if ((1.0 + kLabelMargin) * (half_[i][0] + half_[j][0]) - std::abs(d.x) <= 0.0 ||
            (1.0 + kLabelMargin) * (half_[i][1] + half_[j][1]) - std::abs(d.y) <= 0.0)
          continue;
        const double dist = norm(d);
        Point dir = dist > 0.0 ? d * (1.0 / dist)
                               : pair_direction(cfg_.rng_seed, ids_[i], ids_[j]) *
                                     (ids_[i] < ids_[j] ? 1.0 : -1.0);
        force += dir * cfg_.delta;
      }
    }

    // Node-to-edge repulsion, and the zone keeping p off every non-incident edge.
    for (const auto& e : edges_) {
      if (e.a == i || e.b == i) continue;
      const Point a = pos_[e.a], b = pos_[e.b];
      if (box_distance(p, a, b) > cutoff) continue;
      Point closest;
      const double dist = point_segment_distance(p, a, b, &closest);
      if (dist == 0.0) {
        zones.freeze();
        continue;
      }
      zones.clamp_toward(closest - p, dist / sigma);
      if (dist < cfg_.node_edge_margin) {
        const double gap = cfg_.node_edge_margin - dist;
        force += (p - closest) * (gap * gap / (dist * dist));
      }
    }

    // As an edge endpoint, p must not drag its edge onto another node.
    for (const auto& [nb, e] : incident_[i]) {
      const Point q = pos_[nb];
      for (std::size_t w = 0; w < pos_.size(); ++w) {
        if (w == i || w == nb) continue;
        const Point o = pos_[w];
        if (box_distance(o, p, q) > cutoff) continue;
        Point closest;
        const double dist = point_segment_distance(o, p, q, &closest);
        if (dist == 0.0) {
          zones.freeze();
          continue;
        }
        zones.clamp_toward(o - closest, dist / sigma);
      }
    }

    Point disp;
    const double magnitude = norm(force);
    if (magnitude > 0.0 && std::isfinite(magnitude)) disp = force * (std::min(magnitude, step) / magnitude);
    const double length = norm(disp);
    double excess = -1.0;
    if (length > 0.0) {
      const double limit = zones.limit[static_cast<std::size_t>(direction_sector(disp))];
      if (length > limit) disp = limit > 0.0 ? disp * (limit / length) : Point{};
      excess = norm(disp) - limit;
    }
    disp_[i] = disp;
    excess_[i] = excess;
  }

  const ForceConfig& cfg_;
  std::size_t capacity_;
  std::vector<NodeIndex> ids_;
  std::vector<Point> pos_;
  std::vector<LocalEdge> edges_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> incident_;
  std::vector<std::vector<std::uint32_t>> neighbors_;
  std::vector<std::array<double, 2>> half_;
  double repulsion_ = 0.0;
  std::vector<Point> disp_;
  std::vector<double> excess_;
};

}  // namespace

void ForceConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::BadConfig, what); };
  if (iterations <= 0) fail("iterations must be positive");
  if (!(base_edge_length > 0.0)) fail("base edge length must be positive");
  if (!(level_decay > 0.0 && level_decay < 1.0)) fail("level decay must lie in (0, 1)");
  if (!(cooling > 0.0 && cooling <= 1.0)) fail("cooling must lie in (0, 1]");
  if (!(delta > 0.0)) fail("delta must be positive");
  if (!(node_edge_margin >= 0.0)) fail("node-edge margin must be non-negative");
  if (!(safety_divisor > 2.0)) fail("safety divisor must exceed 2");
  if (!(repulsion >= 0.0)) fail("repulsion must be non-negative");
  if (initial_step < 0.0) fail("initial step must be non-negative");
}

double desired_length_for_level(int level, const ForceConfig& cfg) {
  if (level < 1) throw Error(ErrorCode::InvalidLevel, "edge level must be at least 1");
  return cfg.base_edge_length * std::pow(cfg.level_decay, level - 1);
}

DesiredLengths::DesiredLengths(std::vector<double> lengths) : lengths_(std::move(lengths)) {
  for (double l : lengths_)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::BadConfig, "desired lengths must be positive");
}

DesiredLengths DesiredLengths::from_levels(std::span<const int> edge_levels, const ForceConfig& cfg) {
  std::vector<double> out;
  out.reserve(edge_levels.size());
  for (int level : edge_levels) out.push_back(desired_length_for_level(level, cfg));
  return DesiredLengths(std::move(out));
}

double DesiredLengths::mean() const noexcept {
  if (lengths_.empty()) return 0.0;
  return std::accumulate(lengths_.begin(), lengths_.end(), 0.0) / static_cast<double>(lengths_.size());
}

int direction_sector(Point d) noexcept {
  const double angle = normalize_angle(std::atan2(d.y, d.x));
  const int s = static_cast<int>(angle / (kTwoPi / kSectors));
  return std::clamp(s, 0, kSectors - 1);
}

Layout initial_layout(std::span<const NodeIndex> nodes, std::span<const NodePair> tree,
                      std::size_t capacity, double ring_spacing, std::span<const std::uint32_t> id_rank) {
  auto rank = [&](NodeIndex v) -> std::uint64_t { return id_rank.empty() ? v : id_rank[v]; };
  if (nodes.empty()) throw Error(ErrorCode::NotATree, "tree has no nodes");
  if (tree.size() + 1 != nodes.size()) throw Error(ErrorCode::NotATree, "edge count is not node count - 1");

  std::size_t cap = capacity;
  for (NodeIndex v : nodes) cap = std::max<std::size_t>(cap, v + 1);
  std::vector<std::vector<NodeIndex>> adj(cap);
  for (const auto& e : tree) {
    if (e.u >= cap || e.v >= cap || e.u == e.v) throw Error(ErrorCode::NotATree, "bad tree edge");
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end(), [&](NodeIndex a, NodeIndex b) { return rank(a) < rank(b); });

  NodeIndex root = nodes.front();
  for (NodeIndex v : nodes) {
    if (adj[v].size() > adj[root].size() || (adj[v].size() == adj[root].size() && rank(v) < rank(root)))
      root = v;
  }

  // Preorder with parents and depths; detects cycles and disconnection.
  std::vector<NodeIndex> parent(cap, kNoNode), order;
  std::vector<int> depth(cap, -1);
  std::vector<NodeIndex> stack{root};
  depth[root] = 0;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
      if (*it == parent[v]) continue;
      if (depth[*it] >= 0) throw Error(ErrorCode::NotATree, "tree contains a cycle");
      parent[*it] = v;
      depth[*it] = depth[v] + 1;
      stack.push_back(*it);
    }
  }
  if (order.size() != nodes.size()) throw Error(ErrorCode::NotATree, "tree is disconnected");

  // Children precede parents in reverse preorder, so a zero count means a leaf.
  std::vector<double> leaves(cap, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeIndex v = *it;
    if (leaves[v] == 0.0) leaves[v] = 1.0;
    if (parent[v] != kNoNode) leaves[parent[v]] += leaves[v];
  }

  Layout layout(capacity);
  std::vector<double> angle(cap, 0.0), wedge_start(cap, 0.0), wedge_width(cap, 0.0);
  layout.set(root, {0.0, 0.0});
  wedge_start[root] = 0.0;
  wedge_width[root] = kTwoPi;
  for (NodeIndex v : order) {
    double start = wedge_start[v];
    const double width = wedge_width[v];
    const double total = leaves[v];
    for (NodeIndex c : adj[v]) {
      if (c == parent[v]) continue;
      const double share = width * leaves[c] / total;
      const double theta = start + 0.5 * share;
      const int d = depth[c];
      const double r = ring_spacing * d;
      layout.set(c, {r * std::cos(theta), r * std::sin(theta)});
      angle[c] = theta;
      // Children of c sit on the next ring; keeping them within acos(d/(d+1))
      // of theta keeps the connecting chords outside ring d.
      const double half = std::min(0.5 * share, std::acos(static_cast<double>(d) / (d + 1)));
      wedge_start[c] = theta - half;
      wedge_width[c] = 2.0 * half;
      start += share;
    }
  }

  if (count_crossings(layout, tree) != 0)
    throw Error(ErrorCode::InvariantViolation, "radial layout produced a crossing");
  return layout;
}

Layout impred_improve(const Layout& layout, std::span<const NodePair> edges, const ForceConfig& cfg,
                      const DesiredLengths& lengths, ForceStats* stats) {
  cfg.validate();
  ForceEngine engine(layout, edges, cfg, lengths, {});
  double step = cfg.step0();
  const double settle = 1e-9 * cfg.base_edge_length;
  for (int t = 0; t < cfg.iterations; ++t, step *= cfg.cooling)
    if (engine.iterate(step, stats) < settle) break;
  return engine.result();
}

Layout remove_overlaps(const Layout& layout, std::span<const NodePair> edges,
                       std::span<const LabelBox> boxes, const ForceConfig& cfg,
                       const DesiredLengths& lengths, ForceStats* stats) {
  cfg.validate();
  if (rect_overlap_count(layout, boxes) == 0) return layout;

  ForceEngine engine(layout, edges, cfg, lengths, boxes);
  double step = cfg.step0();
  for (int t = 0; t < cfg.iterations && engine.overlap_count() > 0; ++t, step *= cfg.cooling)
    engine.iterate(step, stats);

  Layout out = engine.result();
  if (engine.overlap_count() > 0) {
    if (stats != nullptr) stats->overlaps_before_scaling = engine.overlap_count();
    scale_until_overlap_free(out, edges, boxes, cfg, stats);
  }
  return out;
}

int scale_until_overlap_free(Layout& layout, std::span<const NodePair> edges,
                             std::span<const LabelBox> boxes, const ForceConfig& cfg, ForceStats* stats) {
  const std::size_t crossings = count_crossings(layout, edges);

  // Coincident centres never separate under scaling; nudge them apart first.
  auto nodes = layout.nodes();
  std::stable_sort(nodes.begin(), nodes.end(), [&](NodeIndex a, NodeIndex b) {
    const Point pa = layout[a], pb = layout[b];
    return pa.x != pb.x ? pa.x < pb.x : pa.y < pb.y;
  });
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const NodeIndex anchor = nodes[k - 1], v = nodes[k];
    if (!(layout[anchor] == layout[v])) continue;
    const Point origin = layout[v];
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      const double r = 1e-6 * cfg.base_edge_length * (1 + attempt / 8);
      layout.set(v, origin + pair_direction(cfg.rng_seed, anchor, v, attempt) * r);
      bool distinct = true;
      for (NodeIndex w : layout.nodes())
        if (w != v && layout[w] == layout[v]) distinct = false;
      placed = distinct && count_crossings(layout, edges) == crossings;
    }
    if (!placed) {
      layout.set(v, origin);
      throw Error(ErrorCode::DegenerateLayout, "could not separate coincident nodes without a crossing");
    }
    if (stats != nullptr) ++stats->jittered_nodes;
  }

  int steps = 0;
  const Point center = layout.centroid();
  while (rect_overlap_count(layout, boxes) > 0) {
    if (++steps > kMaxScaleSteps)
      throw Error(ErrorCode::InvariantViolation, "scaling did not remove label overlaps");
    layout.scale_about(center, kScaleStep);
  }
  if (stats != nullptr) stats->scaling_steps += steps;
  return steps;
}

}  // namespace zmlt
