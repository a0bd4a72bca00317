#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmlt/graph.hpp"
#include "zmlt/layout.hpp"
#include "zmlt/steiner.hpp"

namespace zmlt {

/// Mean drawn length of the edges new at each level divided by the mean drawn
/// length of level-1 edges. Levels without new edges are absent. When T_1 has
/// no edges the first level that has some is the reference.
std::vector<std::optional<double>> metric_dl(std::span<const Layout> layouts, const WeightedGraph& g,
                                             const LevelHierarchy& h);

/// Scale-free stress over all pairs of placed nodes:
/// sum of d^-2 (alpha * |p_i - p_j| - d)^2 with d the hop distance along
/// `edges` and alpha the least-squares optimal scale. Throws Disconnected
/// when `edges` do not connect the placed nodes.
double metric_stress(const Layout& layout, std::span<const NodePair> edges);

/// Area of the label bounding box over the summed label areas.
double metric_cm(const Layout& layout, std::span<const LabelBox> boxes);

/// Coefficient of variation of drawn edge lengths (population deviation).
double metric_eu(const Layout& layout, std::span<const NodePair> edges);

struct BoxSize {
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const BoxSize&, const BoxSize&) = default;
};

/// Size of the bounding box including label extents.
BoxSize metric_bb(const Layout& layout, std::span<const LabelBox> boxes);

struct LevelMetrics {
  int level = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::optional<double> dl;
  double stress = 0.0;
  double cm = 0.0;
  std::optional<double> eu;
  BoxSize bb;
  std::size_t crossings = 0;
  std::size_t overlaps = 0;

  friend bool operator==(const LevelMetrics&, const LevelMetrics&) = default;
};

struct MetricsReport {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<LevelMetrics> levels;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// All metrics for the per-level drawings of a hierarchy.
MetricsReport report(std::span<const Layout> layouts, const WeightedGraph& g, const LevelHierarchy& h,
                     std::span<const LabelBox> boxes);

/// Aligned plain-text table, one row per level.
std::string render_table(const MetricsReport& report);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& doc);

}  // namespace zmlt
