#include "gather/catalog.hpp"
#include "gather/engine.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace gather;
using testing_support::trace_csv;

namespace {

Scenario from_body(const std::string& body) {
  return parse_scenario(std::string(kScenarioHeader) + "\n" + body);
}

std::string two_robot_body(const std::string& algorithm, const std::string& extra = "") {
  return "algorithm = " + algorithm +
         "\nscheduler = round-robin\nrobot = 0 0 100\nrobot = 10 0 100\nmax_steps = 1000\n" + extra;
}

}  // namespace

TEST(ScenarioText, CatalogEntriesRoundTrip) {
  for (const auto& name : catalog_names()) {
    const auto s = catalog_scenario(name);
    const auto text = to_text(s);
    const auto again = parse_scenario(text);
    EXPECT_EQ(to_text(again), text) << name;
    EXPECT_EQ(again.n(), s.n()) << name;
    EXPECT_FALSE(catalog_description(name).empty());
  }
  EXPECT_THROW(catalog_text("no-such-entry"), std::invalid_argument);
}

TEST(ScenarioText, ParsesComments) {
  const auto s = from_body(
      "# two robots\nname = pair  # trailing\nalgorithm = prob-basic\nscheduler = k-bounded\n"
      "k = 3\nrobot = 0 0 1\nrobot = 1 1 2\nseed = 9\ngoal = weak\n");
  EXPECT_EQ(s.name, "pair");
  EXPECT_EQ(s.scheduler.kind, SchedulerKind::FairKBounded);
  EXPECT_EQ(s.scheduler.k, 3u);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.goal, Goal::Weak);
  ASSERT_EQ(s.robots.size(), 2u);
  EXPECT_DOUBLE_EQ(s.robots[1].delta_r, 2.0);
}

TEST(ScenarioText, RejectsBadInput) {
  EXPECT_THROW(parse_scenario("robot = 0 0 1\n"), std::invalid_argument);
  EXPECT_THROW(from_body("colour = red\nrobot = 0 0 1\n"), std::invalid_argument);
  EXPECT_THROW(from_body("robot = 0 0\n"), std::invalid_argument);
  EXPECT_THROW(from_body("robot = 0 0 0\n"), std::invalid_argument);
  EXPECT_THROW(from_body("robot = 0 0 1\nrobot = 1 0 1\ncrash = 0 3\nf = 0\n"), std::invalid_argument);
  EXPECT_THROW(from_body("robot = 0 0 1\nrobot = 1 0 1\nscheduler = scripted\n"), std::invalid_argument);
  try {
    from_body("robot = 0 0 1\nmax_steps = many\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Run, TwoRobotRuleMeetsAfterTenAlternatingSteps) {
  const auto s = from_body(
      "algorithm = two-robot\nscheduler = scripted\nscript = 0 | 1\nrobot = 0 0 1\nrobot = 10 0 1\n");
  const auto r = run(s);
  EXPECT_EQ(r.outcome.kind, OutcomeKind::StrongGathered);
  EXPECT_EQ(r.outcome.step, 10u);
  EXPECT_TRUE(r.schedule_check.ok);
}

TEST(Run, GatheredStartStopsAtTimeZero) {
  const auto r = run(from_body("algorithm = prob-ft\nrobot = 3 3 1\nrobot = 3 3 1\nrobot = 3 3 1\n"));
  EXPECT_EQ(r.outcome.kind, OutcomeKind::StrongGathered);
  EXPECT_EQ(r.outcome.step, 0u);
  EXPECT_EQ(r.steps_executed, 0u);
}

TEST(Run, CatalogOutcomesMatchTheirExpectations) {
  for (const auto& name : catalog_names()) {
    const auto s = catalog_scenario(name);
    const auto r = run(s);
    EXPECT_TRUE(r.schedule_check.ok) << name << ": " << r.schedule_check.message;
    if (s.expect) EXPECT_EQ(to_string(r.outcome.kind), *s.expect) << name;
  }
}

TEST(Run, ReplayIsDeterministic) {
  auto s = catalog_scenario("crash-wg");
  const auto a = run(s);
  const auto b = run(s);
  EXPECT_EQ(trace_csv(a), trace_csv(b));
  s.seed += 1;
  EXPECT_NE(trace_csv(run(s)), trace_csv(a));
}

TEST(Run, CrashedRobotsNeverMoveAgain) {
  const auto s = catalog_scenario("crash-wg");
  const auto r = run(s);
  std::map<std::size_t, Point> frozen;
  for (const auto& rec : r.trace) {
    if (rec.status != RobotStatus::Crashed) continue;
    ASSERT_NE(rec.decision, TraceDecision::Move);
    auto [it, fresh] = frozen.emplace(rec.robot.index, rec.position);
    if (!fresh) ASSERT_EQ(it->second, rec.position);
  }
  EXPECT_EQ(frozen.size(), 2u);
}

TEST(Trace, CsvRoundTripAndHistory) {
  const auto r = run(catalog_scenario("crash-wg"));
  const auto csv = trace_csv(r);
  std::istringstream in(csv);
  const auto back = read_trace_csv(in);
  ASSERT_EQ(back.size(), r.trace.size());
  std::ostringstream out;
  write_trace_csv(out, back);
  EXPECT_EQ(out.str(), csv);
  EXPECT_EQ(history_from_trace(back), r.history);
  EXPECT_EQ(r.history.size(), r.steps_executed);
}

TEST(Trace, EveryRobotAppearsAtEveryStep) {
  const auto r = run(catalog_scenario("byz-attractor"));
  const std::size_t n = r.final.size();
  ASSERT_EQ(r.trace.size() % n, 0u);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    ASSERT_EQ(r.trace[i].step, i / n);
    ASSERT_EQ(r.trace[i].robot.index, i % n);
  }
}

TEST(MonteCarlo, ThreadCountDoesNotChangeAggregates) {
  const auto s = from_body(two_robot_body("prob-basic", "scheduler = fair-arbitrary\n"));
  const auto one = monte_carlo(s, 200, 7, 1);
  const auto four = monte_carlo(s, 200, 7, 4);
  EXPECT_EQ(one.successes, four.successes);
  EXPECT_DOUBLE_EQ(one.mean_steps, four.mean_steps);
  EXPECT_DOUBLE_EQ(one.stddev, four.stddev);
  EXPECT_EQ(one.outcomes, four.outcomes);
  EXPECT_EQ(one.runs, 200u);
}

TEST(Derandomizer, RepeatsUntilTheCoinSucceeds) {
  auto s = from_body(two_robot_body("prob-basic", "adversary = derandomizer\nscheduler = fair-centralized\nwindow = 200\n"));
  const auto stats = monte_carlo(s, 4000, 1, 0);
  ASSERT_EQ(stats.successes, 4000u);
  EXPECT_NEAR(stats.mean_steps, 2.0, 0.1);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    s.seed = seed;
    const auto r = run(s);
    ASSERT_TRUE(r.schedule_check.ok) << r.schedule_check.message;
    for (std::size_t t = 1; t + 1 < r.history.size(); ++t) ASSERT_EQ(r.history[t], r.history[0]);
  }
}

TEST(Derandomizer, DeterministicAlgorithmsSeePlainRoundRobin) {
  const std::string robots = "robot = 0 0 1\nrobot = 5 0 1\nrobot = 9 1 1\nmax_steps = 30\ngoal = none\n";
  const auto plain = run(from_body("algorithm = nearest-neighbor\nscheduler = round-robin\n" + robots));
  const auto adv = run(from_body(
      "algorithm = nearest-neighbor\nscheduler = round-robin\nadversary = derandomizer\n" + robots));
  EXPECT_EQ(plain.history, adv.history);
  EXPECT_EQ(trace_csv(plain), trace_csv(adv));
}

TEST(SwapAdversary, KTwoHistoryValidates) {
  const auto r = run(catalog_scenario("k2-swap"));
  EXPECT_EQ(r.outcome.kind, OutcomeKind::Recurrence);
  EXPECT_TRUE(validate_history(SchedulerSpec::k_bounded_centralized(2), r.history, 3).ok);
}

TEST(Summary, ReportsOutcomeAndRecurrence) {
  const auto s = catalog_scenario("fig2-cycle");
  const auto r = run(s);
  std::ostringstream out;
  write_summary(out, s, r);
  EXPECT_NE(out.str().find("outcome: Recurrence"), std::string::npos);
  EXPECT_NE(out.str().find("recurrence_period: 3"), std::string::npos);
}
