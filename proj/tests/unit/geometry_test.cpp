#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zmlt/geometry.hpp"

#include "oracles.hpp"
#include "random_graph.hpp"

namespace zmlt {
namespace {

constexpr double kPi = std::numbers::pi;

Segment seg(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y1}}; }

Layout layout_of(std::initializer_list<Point> points) {
  Layout l(points.size());
  NodeIndex v = 0;
  for (Point p : points) l.set(v++, p);
  return l;
}

TEST(SegmentsCross, Examples) {
  EXPECT_TRUE(segments_cross(seg(0, 0, 1, 1), seg(0, 1, 1, 0)));
  EXPECT_FALSE(segments_cross(seg(0, 0, 1, 0), seg(1, 0, 2, 1)));
  EXPECT_TRUE(segments_cross(seg(0, 0, 2, 0), seg(1, 0, 3, 0)));
}

TEST(SegmentsCross, DisjointAndTouching) {
  EXPECT_FALSE(segments_cross(seg(0, 0, 1, 0), seg(0, 1, 1, 1)));
  EXPECT_TRUE(segments_cross(seg(0, 0, 2, 0), seg(1, 0, 1, 1)));
  EXPECT_FALSE(segments_cross(seg(0, 0, 1, 0), seg(2, 0, 3, 0)));
}

TEST(SegmentsCross, SharedNodeNeverCrosses) {
  Segment a = seg(0, 0, 2, 0), b = seg(0, 0, 3, 0);
  a.edge = {0, 1};
  b.edge = {0, 2};
  EXPECT_FALSE(segments_cross(a, b));
}

TEST(CountCrossings, K4Square) {
  const auto l = layout_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const std::vector<NodePair> k4{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}, {1, 3}};
  EXPECT_EQ(count_crossings(l, k4), 1u);
  EXPECT_EQ(count_crossings_naive(l, k4), 1u);
}

TEST(CountCrossings, SingleEdge) {
  const auto l = layout_of({{0, 0}, {1, 0}});
  const std::vector<NodePair> e{{0, 1}};
  EXPECT_EQ(count_crossings(l, e), 0u);
}

TEST(CountCrossings, MissingPositionThrows) {
  Layout l(3);
  l.set(0, {0, 0});
  l.set(1, {1, 0});
  const std::vector<NodePair> e{{0, 2}};
  EXPECT_THROW(count_crossings(l, e), Error);
}

TEST(CountCrossings, SweepMatchesPairwiseOn1000Layouts) {
  std::mt19937_64 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 30)(rng);
    const auto layout = testing::random_layout(rng, static_cast<std::size_t>(n), 100.0);
    std::vector<NodePair> edges;
    const int m = std::uniform_int_distribution<int>(1, 2 * n)(rng);
    for (int i = 0; i < m; ++i) {
      NodeIndex a = std::uniform_int_distribution<NodeIndex>(0, n - 1)(rng);
      NodeIndex b = std::uniform_int_distribution<NodeIndex>(0, n - 1)(rng);
      if (a == b) continue;
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    const auto expected = testing::oracle::crossings(layout, edges);
    ASSERT_EQ(count_crossings_naive(layout, edges), expected) << "trial " << trial;
    ASSERT_EQ(count_crossings(layout, edges), expected) << "trial " << trial;
  }
}

TEST(CountCrossings, GridAlignedCollinear) {
  // Integer grid coordinates make touching and collinear cases common.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    Layout layout(12);
    for (NodeIndex v = 0; v < 12; ++v)
      layout.set(v, {double(std::uniform_int_distribution<int>(0, 4)(rng)),
                     double(std::uniform_int_distribution<int>(0, 4)(rng))});
    std::vector<NodePair> edges;
    for (int i = 0; i < 15; ++i) {
      NodeIndex a = std::uniform_int_distribution<NodeIndex>(0, 11)(rng);
      NodeIndex b = std::uniform_int_distribution<NodeIndex>(0, 11)(rng);
      if (a != b && layout[a] != layout[b]) edges.push_back({std::min(a, b), std::max(a, b)});
    }
    ASSERT_EQ(count_crossings(layout, edges), testing::oracle::crossings(layout, edges));
  }
}

TEST(RectOverlap, Examples) {
  const std::vector<PlacedBox> apart{{{0, 0}, 0.5, 0.5}, {{3, 0}, 0.5, 0.5}};
  const std::vector<PlacedBox> same{{{0, 0}, 0.5, 0.5}, {{0, 0}, 0.5, 0.5}};
  const std::vector<PlacedBox> touching{{{0, 0}, 1, 1}, {{2, 0}, 1, 1}};
  EXPECT_EQ(rect_overlap_count(apart), 0u);
  EXPECT_EQ(rect_overlap_count(same), 1u);
  EXPECT_EQ(rect_overlap_count(touching), 0u);
}

TEST(RectOverlap, FastMatchesNaive) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0, 50), half(0.5, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PlacedBox> boxes(40);
    for (auto& b : boxes) b = {{pos(rng), pos(rng)}, half(rng), half(rng)};
    ASSERT_EQ(rect_overlap_count(boxes), rect_overlap_count_naive(boxes));
  }
}

TEST(ConesAround, RightAngle) {
  const auto l = layout_of({{0, 0}, {1, 0}, {0, 1}});
  const std::vector<NodePair> tree{{0, 1}, {0, 2}};
  const auto cones = cones_around(l, tree, 0);
  ASSERT_EQ(cones.size(), 2u);
  EXPECT_NEAR(cones[0].width, kPi / 2, 1e-12);
  EXPECT_NEAR(cones[1].width, 3 * kPi / 2, 1e-12);
  EXPECT_NEAR(cones[0].start_angle, 0.0, 1e-12);
}

TEST(ConesAround, IsolatedAndDegreeFour) {
  const auto single = layout_of({{0, 0}});
  const auto iso = cones_around(single, {}, 0);
  ASSERT_EQ(iso.size(), 1u);
  EXPECT_NEAR(iso[0].width, 2 * kPi, 1e-12);

  const auto cross = layout_of({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  const std::vector<NodePair> tree{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  const auto cones = cones_around(cross, tree, 0);
  ASSERT_EQ(cones.size(), 4u);
  for (const auto& c : cones) EXPECT_NEAR(c.width, kPi / 2, 1e-12);
}

TEST(Cone, ContainsDirection) {
  const Cone c{{0, 0}, 1.5 * kPi, kPi};
  EXPECT_TRUE(c.contains_direction(0.0));
  EXPECT_TRUE(c.contains_direction(1.9 * kPi));
  EXPECT_FALSE(c.contains_direction(kPi));
  EXPECT_NEAR(normalize_angle(-kPi / 2), 1.5 * kPi, 1e-12);
}

TEST(IsMonotonePath, Examples) {
  const std::vector<Point> bend{{0, 0}, {1, 0}, {2, 1}};
  // Steps (1, 0) and (-1, 0.1) are both positive along (1, 11).
  const std::vector<Point> sharp{{0, 0}, {1, 0}, {0, 0.1}};
  const std::vector<Point> back{{0, 0}, {1, 0}, {0.5, 0}};
  const std::vector<Point> two{{3, 4}, {-1, 2}};
  EXPECT_TRUE(is_monotone_path(bend));
  EXPECT_TRUE(is_monotone_path(sharp));
  EXPECT_FALSE(is_monotone_path(back));
  EXPECT_TRUE(is_monotone_path(two));
}

TEST(IsMonotonePath, ZigZagWithinQuarterPlane) {
  const std::vector<Point> zig{{0, 0}, {1, 0.9}, {2, 0}, {3, 0.9}, {4, 0}};
  const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(is_monotone_path(zig));
  EXPECT_FALSE(is_monotone_path(square));
}

TEST(PointSegmentDistance, ClosestPoint) {
  Point c;
  EXPECT_DOUBLE_EQ(point_segment_distance({1, 2}, {0, 0}, {2, 0}, &c), 2.0);
  EXPECT_EQ(c, (Point{1, 0}));
  EXPECT_DOUBLE_EQ(point_segment_distance({-3, 4}, {0, 0}, {2, 0}), 5.0);
}

TEST(ClearanceRadius, Examples) {
  const auto l = layout_of({{0, 0}, {-1, 2}, {1, 2}, {0, -1}});
  const std::vector<NodePair> edges{{1, 2}, {0, 3}};
  EXPECT_DOUBLE_EQ(clearance_radius(l, edges, 0), 1.0);

  const auto pair = layout_of({{0, 0}, {1, 0}});
  const std::vector<NodePair> one{{0, 1}};
  EXPECT_EQ(clearance_radius(pair, one, 0, 500.0), 500.0);

  const auto twin = layout_of({{0, 0}, {0, 0}, {5, 5}});
  const std::vector<NodePair> e{{1, 2}};
  try {
    clearance_radius(twin, e, 0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::DegenerateLayout);
  }
}

}  // namespace
}  // namespace zmlt
