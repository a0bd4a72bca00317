#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "zmlt/metrics.hpp"
#include "zmlt/pipeline.hpp"

#include "oracles.hpp"
#include "random_graph.hpp"

namespace zmlt {
namespace {

Layout layout_of(std::initializer_list<Point> points) {
  Layout l(points.size());
  NodeIndex v = 0;
  for (Point p : points) l.set(v++, p);
  return l;
}

std::vector<LabelBox> unit_boxes(std::size_t n) {
  std::vector<LabelBox> b(n);
  for (NodeIndex v = 0; v < n; ++v) b[v] = {v, 1, 1, 1};
  return b;
}

TEST(MetricStress, PerfectFits) {
  const std::vector<NodePair> one{{0, 1}};
  EXPECT_NEAR(metric_stress(layout_of({{0, 0}, {3, 4}}), one), 0.0, 1e-12);
  const std::vector<NodePair> path{{0, 1}, {1, 2}};
  EXPECT_NEAR(metric_stress(layout_of({{0, 0}, {1, 0}, {2, 0}}), path), 0.0, 1e-12);
}

TEST(MetricStress, StarAt120Degrees) {
  Layout l(4);
  l.set(0, {0, 0});
  for (NodeIndex v = 1; v <= 3; ++v) {
    const double a = 2.0 * std::numbers::pi * (v - 1) / 3.0;
    l.set(v, {std::cos(a), std::sin(a)});
  }
  const std::vector<NodePair> star{{0, 1}, {0, 2}, {0, 3}};
  const double st = metric_stress(l, star);
  EXPECT_GT(st, 0.0);
  EXPECT_NEAR(st, testing::oracle::stress(l, star), 1e-12);
}

TEST(MetricStress, Errors) {
  const std::vector<NodePair> none;
  try {
    metric_stress(layout_of({{0, 0}, {1, 0}}), none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Disconnected);
  }
  Layout partial(3);
  partial.set(0, {0, 0});
  partial.set(1, {1, 0});
  const std::vector<NodePair> dangling{{0, 1}, {1, 2}};
  EXPECT_THROW(metric_stress(partial, dangling), Error);
}

TEST(MetricCm, Examples) {
  EXPECT_DOUBLE_EQ(metric_cm(layout_of({{5, 5}}), unit_boxes(1)), 1.0);
  EXPECT_DOUBLE_EQ(metric_cm(layout_of({{0, 0}, {1, 0}}), unit_boxes(2)), 1.0);
  EXPECT_DOUBLE_EQ(metric_cm(layout_of({{0, 0}, {3, 0}}), unit_boxes(2)), 2.0);
}

TEST(MetricEu, Examples) {
  const std::vector<NodePair> two{{0, 1}, {1, 2}};
  EXPECT_NEAR(metric_eu(layout_of({{0, 0}, {1, 0}, {1, 1}}), two), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(metric_eu(layout_of({{0, 0}, {1, 0}, {4, 0}}), two), 0.5);
  try {
    metric_eu(layout_of({{0, 0}}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyLevel);
  }
}

TEST(MetricBb, Examples) {
  const auto a = metric_bb(layout_of({{0, 0}}), unit_boxes(1));
  EXPECT_DOUBLE_EQ(a.width, 1.0);
  EXPECT_DOUBLE_EQ(a.height, 1.0);
  auto l = layout_of({{0, 0}, {10, 0}});
  const auto b = metric_bb(l, unit_boxes(2));
  EXPECT_DOUBLE_EQ(b.width, 11.0);
  EXPECT_DOUBLE_EQ(b.height, 1.0);
  l.translate({-7.25, 3.5});
  const auto c = metric_bb(l, unit_boxes(2));
  EXPECT_DOUBLE_EQ(c.width, 11.0);
  EXPECT_DOUBLE_EQ(c.height, 1.0);
}

struct ThreeLevelPath {
  WeightedGraph g = testing::graph_from_pairs(4, {{0, 1}, {1, 2}, {2, 3}}, {4, 3, 2, 1});
  LevelHierarchy h;
  ThreeLevelPath() {
    const std::vector<double> pct{0.5, 0.75, 1.0};
    h = make_hierarchy(g, build_filtration(g, pct), {{0}, {0, 1}, {0, 1, 2}});
  }
};

TEST(MetricDl, HalvingMeans) {
  ThreeLevelPath p;
  const auto final_layout = layout_of({{0, 0}, {4, 0}, {6, 0}, {7, 0}});
  const auto levels = extract_levels(final_layout, p.h);
  const auto dl = metric_dl(levels, p.g, p.h);
  ASSERT_EQ(dl.size(), 3u);
  EXPECT_DOUBLE_EQ(*dl[0], 1.0);
  EXPECT_DOUBLE_EQ(*dl[1], 0.5);
  EXPECT_DOUBLE_EQ(*dl[2], 0.25);
}

TEST(MetricDl, EqualLengthsAndAbsentLevels) {
  ThreeLevelPath p;
  const auto equal = extract_levels(layout_of({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), p.h);
  for (const auto& d : metric_dl(equal, p.g, p.h)) EXPECT_DOUBLE_EQ(*d, 1.0);

  const std::vector<double> pct{0.5, 0.75, 1.0};
  const auto h = make_hierarchy(p.g, build_filtration(p.g, pct), {{0}, {0, 1, 2}, {0, 1, 2}});
  const auto dl = metric_dl(extract_levels(layout_of({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), h), p.g, h);
  EXPECT_TRUE(dl[1]);
  EXPECT_FALSE(dl[2]);
}

TEST(MetricOracles, RandomLayoutsAgree) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial;
    const auto parent = testing::random_tree_parents(rng, n);
    std::vector<NodePair> edges;
    for (int v = 1; v < n; ++v) edges.push_back({static_cast<NodeIndex>(parent[v]), static_cast<NodeIndex>(v)});
    const auto l = testing::random_layout(rng, static_cast<std::size_t>(n), 20.0);
    std::vector<LabelBox> boxes(n);
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(n); ++v)
      boxes[v] = {v, 10, std::uniform_real_distribution<double>(1, 5)(rng), 2};
    EXPECT_NEAR(metric_stress(l, edges), testing::oracle::stress(l, edges),
                1e-9 * testing::oracle::stress(l, edges));
    EXPECT_NEAR(metric_eu(l, edges), testing::oracle::edge_uniformity(l, edges), 1e-12);
    EXPECT_NEAR(metric_cm(l, boxes), testing::oracle::compactness(l, boxes), 1e-12);
  }
}

TEST(Report, SingleEdgeGraph) {
  const auto g = testing::graph_from_pairs(2, {{0, 1}});
  const std::vector<double> pct{1.0};
  const auto h = extract_hierarchy(g, build_filtration(g, pct));
  const std::vector<Layout> levels{layout_of({{0, 0}, {5, 0}})};
  const auto r = report(levels, g, h, unit_boxes(2));
  ASSERT_EQ(r.levels.size(), 1u);
  EXPECT_EQ(r.levels[0].crossings, 0u);
  EXPECT_EQ(r.levels[0].overlaps, 0u);
  EXPECT_EQ(r.levels[0].edges, 1u);
  EXPECT_DOUBLE_EQ(*r.levels[0].dl, 1.0);
  const std::string table = render_table(r);
  EXPECT_NE(table.find("crossings"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 2);
}

TEST(Report, MissingNodeThrows) {
  const auto g = testing::graph_from_pairs(3, {{0, 1}, {1, 2}});
  const std::vector<double> pct{1.0};
  const auto h = extract_hierarchy(g, build_filtration(g, pct));
  const std::vector<Layout> levels{layout_of({{0, 0}, {5, 0}})};
  try {
    report(levels, g, h, unit_boxes(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingPosition);
  }
}

TEST(Report, JsonRoundTrip) {
  ThreeLevelPath p;
  const auto levels = extract_levels(layout_of({{0, 0}, {4, 0}, {6, 1}, {7, 0}}), p.h);
  auto r = report(levels, p.g, p.h, unit_boxes(4));
  r.metadata = {{"method", "test"}};
  const auto doc = to_json(r);
  EXPECT_EQ(doc["levels"].size(), 3u);
  EXPECT_EQ(doc["levels"][0]["BB"].size(), 2u);
  EXPECT_TRUE(metrics_from_json(doc) == r);
  EXPECT_THROW(metrics_from_json(nlohmann::json::array()), Error);
}

}  // namespace
}  // namespace zmlt
