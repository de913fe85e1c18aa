#pragma once

#include "gather/algorithms.hpp"
#include "gather/faults.hpp"
#include "gather/model.hpp"
#include "gather/schedulers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gather {

enum class Goal { Strong, Weak, Recurrence, None };

std::string_view to_string(Goal goal);
Goal parse_goal(std::string_view text);

/// Who picks the activation sets. Adversaries still claim `Scenario::scheduler`
/// as the class their histories must validate against.
enum class AdversaryKind { None, Derandomizer, Swap, Byzantine };

std::string_view to_string(AdversaryKind kind);
AdversaryKind parse_adversary(std::string_view text);

struct RobotSpec {
  Point position = Point::Zero();
  double delta_r = 1.0;
};

/// Robots placed uniformly in the square [lo, hi]^2 from the scenario seed.
struct RandomPlacement {
  std::size_t count = 0;
  double lo = 0.0;
  double hi = 10.0;
  double delta_r = 1.0;
};

struct Scenario {
  std::string name = "scenario";
  std::vector<RobotSpec> robots;
  std::optional<RandomPlacement> random_robots;
  AlgorithmKind algorithm = AlgorithmKind::ProbBasic;
  std::optional<MultiplicityMode> multiplicity;  ///< defaults to the algorithm's mode
  AlgorithmOptions options;
  SchedulerSpec scheduler;
  AdversaryKind adversary = AdversaryKind::None;
  /// Policy whose picks the derandomizer repeats: "round-robin" or "swap".
  std::string target_policy = "round-robin";
  FaultPlan faults;
  std::uint64_t seed = 1;
  std::size_t max_steps = 10000;
  double eps_snap = kEpsSnap;
  Goal goal = Goal::Strong;
  std::optional<RecurrenceMode> recurrence;  ///< nullopt: no recurrence checking
  bool stop_on_recurrence = true;
  bool record_trace = true;
  bool record_metrics = false;
  /// Expected outcome name, checked by the CLI in --assert mode.
  std::optional<std::string> expect;

  std::size_t n() const { return random_robots ? random_robots->count : robots.size(); }
  MultiplicityMode multiplicity_mode() const {
    return multiplicity.value_or(required_mode(algorithm));
  }
  /// Throws std::invalid_argument with a description of the first problem found.
  void validate() const;
  /// Positions, reaches and fault statuses at time 0.
  Configuration initial_configuration() const;
};

inline constexpr std::string_view kScenarioHeader = "gathering-scenario 1";

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
std::string to_text(const Scenario& scenario);

}  // namespace gather
