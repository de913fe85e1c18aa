#pragma once

#include "gather/scenario.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gather {

enum class OutcomeKind { StrongGathered, WeakGathered, Recurrence, BudgetExhausted };

std::string_view to_string(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::BudgetExhausted;
  std::size_t step = 0;             ///< time of gathering, or of the repeated configuration
  std::optional<Recurrence> recurrence;

  bool gathered() const {
    return kind == OutcomeKind::StrongGathered || kind == OutcomeKind::WeakGathered;
  }
};

enum class TraceDecision { None, Stay, Move, Final };

std::string_view to_string(TraceDecision d);
TraceDecision parse_trace_decision(std::string_view text);

/// One robot at one step: its position before the step and what it did.
struct TraceRecord {
  std::size_t step = 0;
  RobotId robot;
  Point position = Point::Zero();
  RobotStatus status = RobotStatus::Correct;
  bool activated = false;
  TraceDecision decision = TraceDecision::None;
  std::optional<Point> target;  ///< global coordinates
};

struct RunResult {
  Outcome outcome;
  Configuration final;
  std::size_t steps_executed = 0;
  std::vector<Metrics> metrics_series;         ///< one entry per configuration when enabled
  std::vector<TraceRecord> trace;              ///< when trace recording is enabled
  std::vector<Configuration> configurations;   ///< configuration at every time, when recorded
  ActivationHistory history;
  std::optional<Recurrence> first_recurrence;
  ValidationReport schedule_check;
  std::vector<std::string> notes;
};

RunResult run(const Scenario& scenario);

struct Stats {
  std::size_t runs = 0;
  std::size_t successes = 0;
  double mean_steps = 0.0;   ///< over successful runs
  double stddev = 0.0;
  double ci95 = 0.0;         ///< normal-approximation half-width
  bool small_sample = false; ///< fewer than 30 successful runs
  std::map<OutcomeKind, std::size_t> outcomes;

  double success_rate() const { return runs ? static_cast<double>(successes) / runs : 0.0; }
};

/// Independent runs with seeds seed + i * seed_stride. Aggregates do not depend
/// on the number of threads (0 picks the hardware concurrency).
Stats monte_carlo(const Scenario& scenario, std::size_t repeats, std::uint64_t seed_stride = 1,
                  std::size_t threads = 0);

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(std::istream& in);
/// Activation sets of every executed step of a trace.
ActivationHistory history_from_trace(const std::vector<TraceRecord>& trace);

void write_summary(std::ostream& out, const Scenario& scenario, const RunResult& result);
void write_stats(std::ostream& out, const Scenario& scenario, const Stats& stats);

}  // namespace gather
