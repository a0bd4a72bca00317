#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "zmlt/force_layout.hpp"
#include "zmlt/graph.hpp"
#include "zmlt/layout.hpp"
#include "zmlt/steiner.hpp"

namespace zmlt {

/// Monotone drawing of a rooted subtree: root at the origin, every edge
/// direction inside (-half_angle, +half_angle) around +x. Children split
/// their parent's wedge by leaf count and sit unit_length along the bisector
/// of their own sub-wedge. With half_angle <= pi/4 every path between two
/// nodes is monotone.
Layout monotone_subtree_layout(const RootedSubtree& subtree, double unit_length,
                               double half_angle = std::numbers::pi / 4);

struct AugmentStats {
  int placements = 0;
  int shrink_steps = 0;
};

/// Adds the forest to a crossing-free drawing of the current tree.
///
/// Roots are handled in descending order of attached size. At each root,
/// subtrees go largest first into the currently widest cone around it,
/// centred on the cone bisector; a placement that crosses an existing edge or
/// leaves its cone is shrunk by 0.7 and retried. Already placed nodes never move.
Layout augment(const Layout& layout, std::span<const NodePair> tree_edges,
               std::span<const RootedSubtree> forest, double unit_length,
               std::span<const std::uint32_t> id_rank = {}, AugmentStats* stats = nullptr);

/// Rotates the drawing about its centroid to the orientation with the
/// smallest label bounding box among whole degrees and hull edge directions.
/// Candidates that would change the crossing count are skipped; the input is
/// returned when nothing smaller qualifies. Labels stay axis-aligned, so the
/// result may need overlap removal.
Layout orient_compact(const Layout& layout, std::span<const NodePair> edges, std::span<const LabelBox> boxes);

/// Called after the improve and overlap-removal stages of each level.
using StageCallback = std::function<void(int level, const Layout& layout)>;

struct PipelineStats {
  std::vector<ForceStats> improve;
  std::vector<ForceStats> overlap;
  std::vector<AugmentStats> augment;
};

/// Initial layout of T_1, then per level: improve, orient_compact, remove
/// overlaps, and augment with the next forest. Returns the drawing of T_n. Every stage is
/// checked for zero crossings; a violation throws InvariantViolation.
Layout run_pipeline(const WeightedGraph& g, const LevelHierarchy& h, std::span<const LabelBox> boxes,
                    const ForceConfig& cfg, const StageCallback& on_stage = {},
                    PipelineStats* stats = nullptr);

/// Restriction of the final drawing to each tree's nodes.
std::vector<Layout> extract_levels(const Layout& final_layout, const LevelHierarchy& h);

struct GraphDrawing {
  Layout layout;
  std::vector<NodePair> edges;
};

/// The final positions with every edge of G (crossings are allowed here).
GraphDrawing full_graph_layout(const Layout& final_layout, const WeightedGraph& g);

/// Mean label width over the nodes of T_1.
double mean_first_level_label_width(const LevelHierarchy& h, std::span<const LabelBox> boxes);

/// Comparison baseline: radial drawing of T_n scaled uniformly by the smallest
/// factor at which no two labels overlap.
Layout baseline_scale_layout(const WeightedGraph& g, const LevelHierarchy& h,
                             std::span<const LabelBox> boxes, const ForceConfig& cfg);

/// Smallest uniform scale factor (about any point) that leaves no two label
/// boxes overlapping. Throws DegenerateLayout when two nodes coincide.
double minimal_separating_scale(const Layout& layout, std::span<const LabelBox> boxes);

}  // namespace zmlt
