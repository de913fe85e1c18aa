#include "gather/model.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace gather;
using testing_support::make_config;

TEST(Observe, IdentityFrame) {
  const auto c = make_config({{0, 0}, {3, 0}});
  const auto obs = observe(c, RobotId{0}, ObservationFrame::identity_at({0, 0}),
                           MultiplicityMode::WithMultiplicity);
  ASSERT_EQ(obs.valence(), 2u);
  EXPECT_TRUE(obs.points[0].point.isZero(0.0));
  EXPECT_NEAR((obs.points[1].point - Point(3, 0)).norm(), 0.0, 1e-15);
}

TEST(Observe, RotatedScaledFrame) {
  const auto c = make_config({{1, 1}, {2, 1}});
  ObservationFrame f{{1, 1}, std::numbers::pi / 2, 2.0, 1};
  const auto obs = observe(c, RobotId{0}, f, MultiplicityMode::WithMultiplicity);
  EXPECT_NEAR((obs.points[1].point - Point(0, 2)).norm(), 0.0, 1e-12);
}

TEST(Observe, WithoutMultiplicityCollapsesTowers) {
  const auto c = make_config({{2, 2}, {2, 2}, {2, 2}});
  const auto blind = observe(c, RobotId{1}, ObservationFrame::identity_at({2, 2}),
                             MultiplicityMode::WithoutMultiplicity);
  ASSERT_EQ(blind.valence(), 1u);
  EXPECT_EQ(blind.points[0].multiplicity, 1u);
  const auto seeing = observe(c, RobotId{1}, ObservationFrame::identity_at({2, 2}),
                              MultiplicityMode::WithMultiplicity);
  EXPECT_EQ(seeing.own_multiplicity(), 3u);
}

TEST(Observe, ValenceMatchesAndFramesRoundTrip) {
  RandomSource rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    auto pts = oracle::random_points(rng, 2 + rng.below(7), -10, 10);
    pts.push_back(pts[rng.below(pts.size())]);
    const auto c = make_config(pts);
    const RobotId me{rng.below(c.size())};
    const auto frame = ObservationFrame::random_at(c[me].position, rng);
    const auto obs = observe(c, me, frame, MultiplicityMode::WithMultiplicity);
    ASSERT_EQ(obs.valence(), metrics(c).valence);
    ASSERT_EQ(obs.own_multiplicity() >= 1, true);
    for (const auto& p : obs.points) {
      const Point g = frame.to_global(p.point);
      ASSERT_NEAR((frame.to_local(g) - p.point).norm(), 0.0, 1e-12 * std::max(1.0, p.point.norm()));
      double best = 1e300;
      for (const auto& q : pts) best = std::min(best, (q - g).norm());
      ASSERT_LT(best, 1e-12 * 100);
    }
  }
}

TEST(ApplyMoves, ReachSemantics) {
  const auto c = make_config({{0, 0}});
  const std::vector<Move> near{{RobotId{0}, {0.5, 0}}};
  EXPECT_EQ(apply_moves(c, near)[RobotId{0}].position, Point(0.5, 0));
  const std::vector<Move> far{{RobotId{0}, {3, 0}}};
  EXPECT_NEAR((apply_moves(c, far)[RobotId{0}].position - Point(1, 0)).norm(), 0.0, 1e-15);
}

TEST(ApplyMoves, MovesUseThePreStepSnapshot) {
  const auto c = make_config({{0, 0}, {2, 0}}, 5.0);
  const std::vector<Move> swap{{RobotId{0}, {2, 0}}, {RobotId{1}, {0, 0}}};
  const auto next = apply_moves(c, swap);
  EXPECT_EQ(next[RobotId{0}].position, Point(2, 0));
  EXPECT_EQ(next[RobotId{1}].position, Point(0, 0));
}

TEST(ApplyMoves, RejectsCrashedMoversAndBadTargets) {
  auto c = make_config({{0, 0}, {1, 0}});
  c[RobotId{1}].status = RobotStatus::Crashed;
  const std::vector<Move> crashed{{RobotId{1}, {0, 0}}};
  EXPECT_THROW(apply_moves(c, crashed), std::logic_error);
  const std::vector<Move> nan{{RobotId{0}, {std::nan(""), 0}}};
  EXPECT_THROW(apply_moves(c, nan), std::invalid_argument);
}

TEST(Metrics, Examples) {
  const auto uni = metrics(make_config({{1, 1}, {1, 1}, {1, 1}, {1, 1}}));
  EXPECT_EQ(uni.valence, 1u);
  EXPECT_EQ(uni.mulmax, 4u);
  EXPECT_DOUBLE_EQ(uni.nearest_neighbor_distance, 0.0);

  const auto biv = metrics(make_config({{0, 0}, {0, 0}, {5, 0}}));
  EXPECT_EQ(biv.valence, 2u);
  EXPECT_EQ(biv.mulmax, 2u);
  ASSERT_EQ(biv.castles.size(), 1u);
  EXPECT_EQ(biv.castles[0], Point(0, 0));
  EXPECT_NEAR(biv.sec_diameter, 5.0, 1e-12);

  RandomSource rng(22);
  const auto distinct = metrics(make_config(oracle::random_points(rng, 5, 0, 10)));
  EXPECT_EQ(distinct.valence, 5u);
  EXPECT_EQ(distinct.mulmax, 1u);
  EXPECT_TRUE(distinct.towers.empty());
}

TEST(IsGathered, StrongWeakAndNot) {
  EXPECT_EQ(is_gathered(make_config({{3, 3}, {3, 3}, {3, 3}})), GatherState::Strong);

  auto weak = make_config({{0, 0}, {0, 0}, {0, 0}, {5, 0}});
  weak[RobotId{3}].status = RobotStatus::Crashed;
  EXPECT_EQ(is_gathered(weak), GatherState::Weak);

  auto tie = make_config({{0, 0}, {0, 0}, {5, 0}, {5, 0}});
  tie[RobotId{2}].status = RobotStatus::Crashed;
  tie[RobotId{3}].status = RobotStatus::Crashed;
  EXPECT_EQ(is_gathered(tie), GatherState::No);
}

TEST(Recurrence, ABAGivesPeriodTwo) {
  const auto a = make_config({{0, 0}, {1, 0}});
  const auto b = make_config({{0, 0}, {2, 0}});
  const std::vector<Configuration> trace{a, b, a};
  const auto r = detect_recurrence(trace);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, (Recurrence{0, 2}));
}

TEST(Recurrence, ShrinkingTraceNeverRepeats) {
  std::vector<Configuration> trace;
  for (int i = 0; i < 50; ++i) trace.push_back(make_config({{0, 0}, {100.0 / (i + 1), 0}}));
  for (auto mode : {RecurrenceMode::Anonymous, RecurrenceMode::Labeled})
    EXPECT_FALSE(detect_recurrence(trace, kEpsSnap, mode).has_value());
}

TEST(Recurrence, ModesDifferOnRelabelingAndSimilarity) {
  const auto a = make_config({{0, 0}, {1, 0}, {1, 0}});
  const auto relabeled = make_config({{1, 0}, {0, 0}, {1, 0}});
  EXPECT_TRUE(configurations_match(a, relabeled, kEpsSnap, RecurrenceMode::Anonymous));
  EXPECT_FALSE(configurations_match(a, relabeled, kEpsSnap, RecurrenceMode::Labeled));

  const auto scaled = make_config({{5, 5}, {5, 8}, {5, 8}});
  EXPECT_FALSE(configurations_match(a, scaled, kEpsSnap, RecurrenceMode::Anonymous));
  EXPECT_TRUE(configurations_match(a, scaled, kEpsSnap, RecurrenceMode::Equivalent));
  const auto mirrored = make_config({{1, 0}, {0, 0}, {0, 0}});
  EXPECT_TRUE(configurations_match(a, mirrored, kEpsSnap, RecurrenceMode::Equivalent));
}

TEST(Recurrence, TagsMustAgree) {
  const auto a = make_config({{0, 0}, {1, 0}});
  RecurrenceDetector d;
  EXPECT_FALSE(d.push(a, 0).has_value());
  EXPECT_FALSE(d.push(a, 1).has_value());
  const auto r = d.push(a, 0);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, (Recurrence{0, 2}));
}

TEST(Grouping, FirstFitAgainstRepresentative) {
  const std::vector<Point> pts{{0, 0}, {0.5e-9, 0}, {3, 0}, {3, 0}};
  const auto locs = group_points(pts, 1e-9);
  ASSERT_EQ(locs.size(), 2u);
  EXPECT_EQ(locs[0].multiplicity(), 2u);
  EXPECT_EQ(locs[1].multiplicity(), 2u);
}

TEST(RandomSource, SubstreamsAreReproducibleAndIndependent) {
  auto a = RandomSource::substream(7, "frames", 0);
  auto b = RandomSource::substream(7, "frames", 0);
  auto c = RandomSource::substream(7, "coins", 0);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  RandomSource r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(7), 7u);
  }
}
