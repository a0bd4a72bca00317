#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zmlt/graph.hpp"
#include "zmlt/layout.hpp"

namespace zmlt {

/// Parameters of the force-directed stages.
struct ForceConfig {
  int iterations = 300;
  /// Desired length of level-1 edges (L0); deeper levels shrink by level_decay.
  double base_edge_length = 100.0;
  double level_decay = 0.65;
  /// First-iteration step limit; 0 means base_edge_length / 2.
  double initial_step = 0.0;
  double cooling = 0.97;
  /// Label-to-label repulsion strength; edge attraction is capped at this
  /// value while labels overlap.
  double delta = 100.0;
  /// Node-to-edge repulsion acts below this distance.
  double node_edge_margin = 10.0;
  /// Movement is limited to (collision distance) / safety_divisor per sector.
  double safety_divisor = 3.0;
  /// Scale of node-to-node repulsion relative to the mean desired length.
  double repulsion = 0.05;
  std::uint64_t rng_seed = 1;

  /// Throws BadConfig when an invariant is violated.
  void validate() const;
  double step0() const noexcept { return initial_step > 0.0 ? initial_step : 0.5 * base_edge_length; }
};

/// Desired length of an edge entering the hierarchy at `level` (1-based).
double desired_length_for_level(int level, const ForceConfig& cfg);

/// Desired length per edge, aligned with an edge list.
class DesiredLengths {
 public:
  DesiredLengths() = default;
  explicit DesiredLengths(std::vector<double> lengths);

  /// Lengths from the entry level of each edge.
  static DesiredLengths from_levels(std::span<const int> edge_levels, const ForceConfig& cfg);

  std::size_t size() const noexcept { return lengths_.size(); }
  double operator[](std::size_t i) const noexcept { return lengths_[i]; }
  std::span<const double> values() const noexcept { return lengths_; }
  double mean() const noexcept;

 private:
  std::vector<double> lengths_;
};

/// Instrumentation filled by the force stages when requested.
struct ForceStats {
  int iterations_run = 0;
  /// Largest |displacement| - zone limit seen; never positive.
  double max_zone_excess = -1.0;
  /// Largest single-iteration displacement.
  double max_displacement = 0.0;
  int scaling_steps = 0;
  int jittered_nodes = 0;
  std::size_t overlaps_before_scaling = 0;
};

/// Crossing-free radial drawing of a tree.
///
/// The root is the node of maximum degree (ties: smallest id rank). Each
/// subtree receives a wedge proportional to its leaf count, bounded so that
/// edges between rings never dip inside the inner ring. `nodes` lists the
/// tree's nodes; with no edges it must hold exactly one node.
Layout initial_layout(std::span<const NodeIndex> nodes, std::span<const NodePair> tree,
                      std::size_t capacity, double ring_spacing,
                      std::span<const std::uint32_t> id_rank = {});

/// Topology-preserving force-directed improvement.
///
/// Applies node-node repulsion (non-adjacent pairs), edge attraction toward
/// `lengths` and node-edge repulsion, with per-node movement limited in
/// eight angular sectors so no node ever reaches a non-incident edge. The
/// crossing count of `edges` is therefore unchanged.
Layout impred_improve(const Layout& layout, std::span<const NodePair> edges, const ForceConfig& cfg,
                      const DesiredLengths& lengths, ForceStats* stats = nullptr);

/// impred_improve plus label-to-label repulsion until no label boxes overlap,
/// then uniform scaling about the centroid as a fallback.
Layout remove_overlaps(const Layout& layout, std::span<const NodePair> edges,
                       std::span<const LabelBox> boxes, const ForceConfig& cfg,
                       const DesiredLengths& lengths, ForceStats* stats = nullptr);

/// Separates coincident nodes and scales by 1.25 about the centroid until no
/// label boxes overlap. Returns the number of scaling steps taken.
int scale_until_overlap_free(Layout& layout, std::span<const NodePair> edges,
                             std::span<const LabelBox> boxes, const ForceConfig& cfg,
                             ForceStats* stats = nullptr);

/// Sector (0..7) of a direction, counter-clockwise from +x in 45 degree steps.
int direction_sector(Point d) noexcept;

}  // namespace zmlt
