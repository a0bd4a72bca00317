#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zmlt/graph.hpp"
#include "zmlt/layout.hpp"
#include "zmlt/steiner.hpp"

namespace zmlt {

/// Uniform scale plus offset from layout units to lon/lat degrees.
struct MapTransform {
  Point center;
  double scale = 1.0;

  Point apply(Point p) const noexcept { return {(p.x - center.x) * scale, (p.y - center.y) * scale}; }
};

inline constexpr double kMaxLongitude = 170.0;
inline constexpr double kMaxLatitude = 75.0;

/// Fits `bounds` into lon [-170, 170] x lat [-75, 75], preserving aspect ratio.
MapTransform fit_transform(const Bounds& bounds);

struct Cluster {
  std::vector<NodeIndex> members;  // ascending
  std::vector<Point> ring;         // closed, counter-clockwise, layout units
};

/// Partitions the graph by greedy modularity-gain label moves (nodes visited
/// by descending weight, fixed pass count), merges the closest communities
/// down to k_hint when k_hint > 0, and outlines each cluster with the convex
/// hull of its nodes padded by its largest label half-extents.
std::vector<Cluster> cluster_regions(const Layout& final_layout, const WeightedGraph& g,
                                     std::span<const LabelBox> boxes, std::size_t k_hint = 0);

/// Node partition only; clusters are ordered by their heaviest member.
std::vector<std::vector<NodeIndex>> modularity_clusters(const WeightedGraph& g, std::size_t k_hint = 0);

/// Modularity of a partition given as cluster id per node.
double modularity(const WeightedGraph& g, std::span<const std::size_t> cluster_of);

/// Convex hull, counter-clockwise, without the closing point.
std::vector<Point> convex_hull(std::vector<Point> points);

struct MapLayers {
  nlohmann::json nodes;
  nlohmann::json edges;
  nlohmann::json clusters;
};

struct ExportOptions {
  std::string font_name = "sans-serif";
  std::size_t k_hint = 0;
};

/// nodelayer, edgelayer and clusterlayer FeatureCollections of the final
/// drawing. Node `level` is the first tree containing the node; only tree
/// edges are exported, each with the first level containing it.
MapLayers to_geojson(const Layout& final_layout, const LevelHierarchy& h, std::span<const LabelBox> boxes,
                     const WeightedGraph& g, const ExportOptions& options = {});

}  // namespace zmlt
