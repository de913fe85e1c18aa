#include "gather/algorithms.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace gather;
using testing_support::make_config;

namespace {

Observation obs_of(std::vector<std::pair<Point, std::size_t>> pts,
                   MultiplicityMode mode = MultiplicityMode::WithMultiplicity) {
  Observation o;
  o.mode = mode;
  for (auto& [p, m] : pts) o.points.push_back({p, m});
  return o;
}

// Decision of robot `me`, mapped back to global coordinates.
std::optional<Point> global_decision(AlgorithmKind kind, const Configuration& c, RobotId me,
                                     const ObservationFrame& frame, std::uint64_t coin_seed) {
  RandomSource coins(coin_seed);
  const auto obs = observe(c, me, frame, required_mode(kind));
  const Decision d = decide(kind, obs, coins);
  if (!d.moves()) return std::nullopt;
  return frame.to_global(d.target);
}

Configuration random_config(RandomSource& rng, std::size_t n, bool towers) {
  auto pts = oracle::random_points(rng, n, -10, 10);
  if (towers)
    for (std::size_t i = 0; i < n / 2; ++i) pts[rng.below(n)] = pts[rng.below(n)];
  return make_config(pts);
}

double sigma3(double p, int draws) { return 3.0 * std::sqrt(p * (1 - p) / draws); }

}  // namespace

TEST(Names, RoundTrip) {
  for (auto k : {AlgorithmKind::ProbBasic, AlgorithmKind::DetFT, AlgorithmKind::DetFTNaive,
                 AlgorithmKind::ProbFT, AlgorithmKind::TwoRobotDet, AlgorithmKind::Barycenter,
                 AlgorithmKind::NearestNeighbor})
    EXPECT_EQ(parse_algorithm(to_string(k)), k);
  EXPECT_THROW(parse_algorithm("teleport"), std::invalid_argument);
  EXPECT_EQ(parse_blocked_rule("listing"), BlockedRule::Listing);
}

TEST(TwoRobot, MovesToTheOtherOrStays) {
  const auto d = alg_two_robot_det(obs_of({{{0, 0}, 1}, {{4, 0}, 1}}));
  ASSERT_TRUE(d.moves());
  EXPECT_EQ(d.target, Point(4, 0));
  EXPECT_FALSE(alg_two_robot_det(obs_of({{{0, 0}, 2}})).moves());
  EXPECT_THROW(alg_two_robot_det(obs_of({{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 1}})), std::invalid_argument);
}

TEST(Barycenter, Examples) {
  const auto d = alg_barycenter(obs_of({{{0, 0}, 1}, {{2, 0}, 1}}));
  EXPECT_NEAR((d.target - Point(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_TRUE(alg_barycenter(obs_of({{{0, 0}, 3}})).target.isZero(0.0));
}

TEST(NearestNeighbor, Examples) {
  const auto d = alg_nearest_neighbor(obs_of({{{0, 0}, 1}, {{1, 0}, 1}, {{5, 0}, 1}}));
  ASSERT_TRUE(d.moves());
  EXPECT_NEAR((d.target - Point(1, 0)).norm(), 0.0, 1e-12);

  const auto c = make_config({{0, 0}, {3, 0}, {3, 0}});
  const auto lone = observe(c, RobotId{0}, ObservationFrame::identity_at({0, 0}),
                            MultiplicityMode::WithoutMultiplicity);
  const auto m = alg_nearest_neighbor(lone);
  ASSERT_TRUE(m.moves());
  EXPECT_NEAR((m.target - Point(3, 0)).norm(), 0.0, 1e-12);
}

TEST(ProbBasic, AlphaIsOneOverValence) {
  const auto biv = obs_of({{{0, 0}, 1}, {{4, 0}, 1}}, MultiplicityMode::WithoutMultiplicity);
  const auto tri = obs_of({{{0, 0}, 1}, {{4, 0}, 1}, {{0, 3}, 1}}, MultiplicityMode::WithoutMultiplicity);
  RandomSource rng(31);
  constexpr int draws = 100000;
  int moves2 = 0, moves3 = 0;
  std::map<std::pair<long, long>, int> targets;
  for (int i = 0; i < draws; ++i) {
    moves2 += alg_prob_basic(biv, rng).moves();
    const auto d = alg_prob_basic(tri, rng);
    if (d.moves()) {
      ++moves3;
      ++targets[{std::lround(d.target.x()), std::lround(d.target.y())}];
    }
  }
  EXPECT_NEAR(moves2 / double(draws), 0.5, sigma3(0.5, draws));
  EXPECT_NEAR(moves3 / double(draws), 1.0 / 3, sigma3(1.0 / 3, draws));
  ASSERT_EQ(targets.size(), 2u);
  for (const auto& [t, count] : targets) {
    EXPECT_TRUE(t == std::make_pair(4L, 0L) || t == std::make_pair(0L, 3L));
    EXPECT_NEAR(count / double(moves3), 0.5, sigma3(0.5, moves3));
  }
}

TEST(ProbBasic, UnivalentStays) {
  RandomSource rng(32);
  for (int i = 0; i < 100; ++i)
    EXPECT_FALSE(alg_prob_basic(obs_of({{{0, 0}, 1}}, MultiplicityMode::WithoutMultiplicity), rng).moves());
}

TEST(DetFT, NearestCastleStraightMove) {
  const auto d = alg_det_ft(obs_of({{{0, 0}, 1}, {{3, 0}, 2}, {{5, 0}, 2}, {{0, 7}, 1}}));
  ASSERT_TRUE(d.moves());
  EXPECT_NEAR((d.target - Point(3, 0)).norm(), 0.0, 1e-12);
}

TEST(DetFT, UniqueCastleObserverStays) {
  EXPECT_FALSE(alg_det_ft(obs_of({{{0, 0}, 3}, {{3, 0}, 2}, {{5, 1}, 1}})).moves());
}

TEST(DetFT, BlockedRobotSideSteps) {
  // One robot strictly between the observer and the only other castle.
  const auto o = obs_of({{{0, 0}, 1}, {{2, 0}, 1}, {{4, 0}, 2}, {{-6, 0}, 2}});
  const auto d = alg_det_ft(o);
  ASSERT_TRUE(d.moves());
  EXPECT_GT(std::abs(d.target.y()), 1e-6);
  EXPECT_LT((d.target - Point(4, 0)).norm(), 4.0);
  EXPECT_EQ(geometry::robots_on_segment<double>(d.target, {4, 0}, o.robot_positions(), 1e-9), 2u);
  const auto naive = alg_det_ft_naive(o);
  EXPECT_NEAR((naive.target - Point(4, 0)).norm(), 0.0, 1e-12);
}

TEST(DetFT, ListingRuleCountsTheCastle) {
  // Between = 1 blocks under the proof rule but not under the listing rule (1 + 2 < 4).
  const auto o = obs_of({{{0, 0}, 1}, {{2, 0}, 1}, {{4, 0}, 2}, {{-6, 0}, 2}});
  const auto d = alg_det_ft(o, {BlockedRule::Listing});
  ASSERT_TRUE(d.moves());
  EXPECT_NEAR((d.target - Point(4, 0)).norm(), 0.0, 1e-12);
}

TEST(DetFT, AppendixStartMatchesNaive) {
  // W_L at -2 with r_L, W_R at 2 with r_R, far castles of two crashed robots at +-10.
  const auto c = make_config({{-2, 0}, {2, 0}, {-10, 0}, {-10, 0}, {10, 0}, {10, 0}, {-2, 0}, {2, 0}});
  const auto frame = ObservationFrame::identity_at({2, 0});
  const auto obs = observe(c, RobotId{1}, frame, MultiplicityMode::WithMultiplicity);
  const auto full = alg_det_ft(obs);
  const auto naive = alg_det_ft_naive(obs);
  ASSERT_TRUE(full.moves());
  ASSERT_TRUE(naive.moves());
  EXPECT_NEAR((frame.to_global(naive.target) - Point(-2, 0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((full.target - naive.target).norm(), 0.0, 1e-12);
}

TEST(ProbFT, DelegatesOutsideCastles) {
  const auto o = obs_of({{{0, 0}, 1}, {{3, 0}, 2}, {{5, 0}, 2}, {{0, 7}, 1}});
  RandomSource rng(33);
  for (int i = 0; i < 100; ++i) {
    const auto d = alg_prob_ft(o, rng);
    ASSERT_TRUE(d.moves());
    ASSERT_NEAR((d.target - alg_det_ft(o).target).norm(), 0.0, 1e-12);
  }
}

TEST(ProbFT, UniqueCastleAlwaysStays) {
  RandomSource rng(34);
  const auto o = obs_of({{{0, 0}, 3}, {{3, 0}, 2}, {{5, 1}, 1}});
  for (int i = 0; i < 1000; ++i) ASSERT_FALSE(alg_prob_ft(o, rng).moves());
}

TEST(ProbFT, TwoCastlesOfThreeMoveWithOneThird) {
  const auto o = obs_of({{{0, 0}, 3}, {{5, 0}, 3}, {{2, 4}, 1}});
  RandomSource rng(35);
  constexpr int draws = 100000;
  int moves = 0;
  for (int i = 0; i < draws; ++i) moves += alg_prob_ft(o, rng).moves();
  EXPECT_NEAR(moves / double(draws), 1.0 / 3, sigma3(1.0 / 3, draws));
}

TEST(ProbFT, CoinIsCappedAtOneHalf) {
  const auto o = obs_of({{{0, 0}, 1}, {{5, 0}, 1}});
  RandomSource rng(36);
  constexpr int draws = 100000;
  int moves = 0;
  for (int i = 0; i < draws; ++i) moves += alg_prob_ft(o, rng).moves();
  EXPECT_NEAR(moves / double(draws), 0.5, sigma3(0.5, draws));
}

TEST(Canonicalize, SimilarObservationsShareTheNormalForm) {
  RandomSource rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_config(rng, 3 + rng.below(6), true);
    const RobotId me{rng.below(c.size())};
    const auto a = canonicalize(observe(c, me, ObservationFrame::random_at(c[me].position, rng),
                                        MultiplicityMode::WithMultiplicity));
    const auto b = canonicalize(observe(c, me, ObservationFrame::random_at(c[me].position, rng),
                                        MultiplicityMode::WithMultiplicity));
    ASSERT_EQ(a.observation.points.size(), b.observation.points.size());
    for (const auto& p : a.observation.points) {
      bool found = false;
      for (const auto& q : b.observation.points)
        found = found || ((p.point - q.point).norm() < 1e-9 && p.multiplicity == q.multiplicity);
      ASSERT_TRUE(found);
    }
  }
}

TEST(FrameInvariance, DeterministicRules) {
  RandomSource rng(38);
  for (auto kind : {AlgorithmKind::DetFT, AlgorithmKind::DetFTNaive, AlgorithmKind::NearestNeighbor,
                    AlgorithmKind::Barycenter}) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto c = random_config(rng, 3 + rng.below(7), true);
      const RobotId me{rng.below(c.size())};
      const auto a = global_decision(kind, c, me, ObservationFrame::random_at(c[me].position, rng), 1);
      const auto b = global_decision(kind, c, me, ObservationFrame::random_at(c[me].position, rng), 1);
      ASSERT_EQ(a.has_value(), b.has_value()) << to_string(kind);
      if (a) ASSERT_NEAR((*a - *b).norm(), 0.0, 1e-9) << to_string(kind) << " trial " << trial;
    }
  }
}

TEST(FrameInvariance, ProbabilisticRulesWithSharedCoins) {
  RandomSource rng(39);
  for (auto kind : {AlgorithmKind::ProbBasic, AlgorithmKind::ProbFT}) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto c = random_config(rng, 2 + rng.below(7), kind == AlgorithmKind::ProbFT);
      const RobotId me{rng.below(c.size())};
      const std::uint64_t coins = rng.next_u64();
      const auto a = global_decision(kind, c, me, ObservationFrame::random_at(c[me].position, rng), coins);
      const auto b = global_decision(kind, c, me, ObservationFrame::random_at(c[me].position, rng), coins);
      ASSERT_EQ(a.has_value(), b.has_value()) << to_string(kind);
      if (a) ASSERT_NEAR((*a - *b).norm(), 0.0, 1e-9) << to_string(kind);
    }
  }
}

TEST(SideMove, RatioFollowsTheScaledLength) {
  RandomSource rng(40);
  for (int trial = 0; trial < 500; ++trial) {
    // q at the origin, the ray towards p along +y, a second castle c above the x axis.
    const Point c(rng.uniform(-4, 4), rng.uniform(0.5, 6));
    if (std::abs(c.x()) < 1e-3) continue;
    const double exit = c.squaredNorm() / (2 * c.y());
    const double alpha = rng.uniform(0.05, 1.0);
    const Point p(0, alpha * exit * (alpha == 1.0 ? 0.999 : 1.0));
    const auto o = obs_of({{{0, 0}, 2}, {c, 2}, {p, 1}});
    const Point target = side_move_target(p, Point(0, 0), o);
    const double m = -c.y() / c.x();
    const double expected = side_move_scaled_length(p.y() / exit, std::numbers::pi / 3, m);
    ASSERT_NEAR(target.norm() / exit, expected, 1e-9) << "trial " << trial;
    // Clockwise from +y means towards +x.
    ASSERT_GT(target.x(), 0.0);
  }
}

TEST(SideMove, NoRobotClockwiseGivesAThirdOfPi) {
  const auto o = obs_of({{{0, 0}, 2}, {{0, 10}, 2}, {{0, 2}, 1}});
  const Point target = side_move_target(Point(0, 2), Point(0, 0), o);
  EXPECT_NEAR(std::atan2(target.x(), target.y()), std::numbers::pi / 3, 1e-12);
}

TEST(SideMove, RejectsDegenerateInput) {
  const auto o = obs_of({{{0, 0}, 2}, {{0, 10}, 2}, {{0, 2}, 1}});
  EXPECT_THROW(side_move_target(Point(0, 0), Point(0, 0), o), std::invalid_argument);
  EXPECT_THROW(side_move_target(Point(0, 2), Point(0, 2), o), std::invalid_argument);
}

TEST(SideMoveScaledLength, LimitAndBranches) {
  EXPECT_NEAR(side_move_scaled_length(1.0, 1e-12, 1e12), 1.0, 1e-9);
  // Non-positive denominator drops the second branch.
  EXPECT_DOUBLE_EQ(side_move_scaled_length(0.5, std::numbers::pi / 3, 0.1),
                   0.25 * std::cos(std::numbers::pi / 3));
  EXPECT_THROW(side_move_scaled_length(0.0, 0.3, 1.0), std::invalid_argument);
  EXPECT_THROW(side_move_scaled_length(1.5, 0.3, 1.0), std::invalid_argument);
}
