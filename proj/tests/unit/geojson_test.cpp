#include <gtest/gtest.h>

#include <algorithm>

#include "zmlt/geojson.hpp"
#include "zmlt/pipeline.hpp"

#include "oracles.hpp"
#include "random_graph.hpp"

namespace zmlt {
namespace {

TEST(FitTransform, PreservesAspectWithinBounds) {
  const Bounds b{0, 0, 200, 50};
  const auto t = fit_transform(b);
  const Point lo = t.apply({0, 0}), hi = t.apply({200, 50});
  EXPECT_NEAR(hi.x - lo.x, 340.0, 1e-9);
  EXPECT_NEAR((hi.y - lo.y) / (hi.x - lo.x), 0.25, 1e-12);
  EXPECT_NEAR(lo.x + hi.x, 0.0, 1e-9);
  EXPECT_LE(hi.y, kMaxLatitude);
}

TEST(ConvexHull, SquareWithInteriorPoint) {
  const auto hull = convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {1, 0}});
  ASSERT_EQ(hull.size(), 4u);
  double area = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) area += cross(hull[i], hull[(i + 1) % hull.size()]);
  EXPECT_NEAR(area / 2, 4.0, 1e-12);
}

TEST(Modularity, MatchesPairSum) {
  const auto g = testing::preferential_graph(3, 12);
  std::vector<std::size_t> part(12);
  for (std::size_t v = 0; v < 12; ++v) part[v] = v % 3;
  EXPECT_NEAR(modularity(g, part), testing::oracle::modularity(g, part), 1e-12);
}

TEST(ModularityClusters, TwoCliquesSplitOptimally) {
  const auto g = testing::graph_from_pairs(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
  const auto clusters = modularity_clusters(g);
  ASSERT_EQ(clusters.size(), 2u);
  EXPECT_EQ(clusters[0], (std::vector<NodeIndex>{0, 1, 2}));
  EXPECT_EQ(clusters[1], (std::vector<NodeIndex>{3, 4, 5}));
  std::vector<std::size_t> part(6);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (NodeIndex v : clusters[c]) part[v] = c;
  EXPECT_NEAR(modularity(g, part), testing::oracle::best_bipartition(g).first, 1e-12);
}

TEST(ModularityClusters, KHintMergesAndIsDeterministic) {
  const auto g = testing::preferential_graph(5, 60);
  const auto a = modularity_clusters(g);
  EXPECT_EQ(a, modularity_clusters(g));
  const auto merged = modularity_clusters(g, 2);
  EXPECT_EQ(merged.size(), std::min<std::size_t>(2, a.size()));
  std::size_t total = 0;
  for (const auto& c : merged) total += c.size();
  EXPECT_EQ(total, 60u);
}

TEST(ClusterRegions, SingleNodeSquare) {
  const WeightedGraph g({{"a", "abc", 1}}, std::vector<EdgeRecord>{});
  Layout l(1);
  l.set(0, {3, 4});
  const std::vector<LabelBox> boxes{{0, 10, 6, 2}};
  const auto clusters = cluster_regions(l, g, boxes);
  ASSERT_EQ(clusters.size(), 1u);
  const auto& ring = clusters[0].ring;
  ASSERT_EQ(ring.size(), 5u);
  EXPECT_EQ(ring.front(), ring.back());
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    EXPECT_NEAR(std::abs(ring[i].x - 3), 3.0, 1e-12);
    EXPECT_NEAR(std::abs(ring[i].y - 4), 1.0, 1e-12);
  }
}

TEST(ToGeojson, TwoNodes) {
  const WeightedGraph g({{"a", "Alpha", 2}, {"b", "Beta", 1}}, std::vector<EdgeRecord>{{"a", "b", 0.5}});
  const std::vector<double> pct{0.5, 1.0};
  const auto h = extract_hierarchy(g, build_filtration(g, pct));
  const std::vector<double> fonts{20, 10};
  const auto boxes = assign_font_sizes(g, h.filtration, fonts);
  Layout l(2);
  l.set(0, {0, 0});
  l.set(1, {100, 0});
  const auto layers = to_geojson(l, h, boxes, g, {"serif", 0});
  ASSERT_EQ(layers.nodes["features"].size(), 2u);
  ASSERT_EQ(layers.edges["features"].size(), 1u);
  const auto& a = layers.nodes["features"][0];
  EXPECT_EQ(a["properties"]["id"], "a");
  EXPECT_EQ(a["properties"]["level"], 1);
  EXPECT_EQ(a["properties"]["font_size"], 20.0);
  EXPECT_EQ(a["properties"]["font_name"], "serif");
  EXPECT_EQ(a["properties"]["weight"], 2.0);
  const auto& edge = layers.edges["features"][0];
  EXPECT_EQ(edge["geometry"]["coordinates"][0], a["geometry"]["coordinates"]);
  EXPECT_EQ(edge["geometry"]["coordinates"][1], layers.nodes["features"][1]["geometry"]["coordinates"]);
  EXPECT_EQ(edge["properties"]["level"], 2);
  EXPECT_EQ(layers.clusters["type"], "FeatureCollection");
  for (const auto& f : layers.nodes["features"]) {
    EXPECT_LE(std::abs(f["geometry"]["coordinates"][0].get<double>()), kMaxLongitude);
    EXPECT_LE(std::abs(f["geometry"]["coordinates"][1].get<double>()), kMaxLatitude);
  }
}

TEST(ToGeojson, EmptyLayoutRejected) {
  const WeightedGraph g({{"a", "Alpha", 2}}, std::vector<EdgeRecord>{});
  const std::vector<double> pct{1.0};
  const auto h = extract_hierarchy(g, build_filtration(g, pct));
  const std::vector<LabelBox> boxes{{0, 10, 5, 1}};
  EXPECT_THROW(to_geojson(Layout(1), h, boxes, g), Error);
}

}  // namespace
}  // namespace zmlt
