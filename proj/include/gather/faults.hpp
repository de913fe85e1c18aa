#pragma once

#include "gather/model.hpp"
#include "gather/schedulers.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gather {

struct CrashEntry {
  RobotId robot;
  std::size_t step = 0;
};

/// Leaves whenever a correct robot joins it, toward the least recently activated correct robot.
struct Attractor {
  double bait_fraction = 0.1;
};

/// Breaks a gathering it is part of by stepping to a fresh point.
struct GatheredBreaker {
  double distance = 1.0;
};

/// On a bivalent configuration, leaves the larger group for the smaller one.
struct Balancer {};

/// Bivalent two-group play where one designated robot, the switch, moves last.
struct Switch {
  RobotId designated;
};

struct ScriptedMoves {
  std::vector<Point> targets;
};

using ByzantineStrategy = std::variant<Attractor, GatheredBreaker, Balancer, Switch, ScriptedMoves>;

std::string strategy_name(const ByzantineStrategy& strategy);

struct ByzantineEntry {
  RobotId robot;
  ByzantineStrategy strategy;
  /// Optional reach limit; unlimited by default.
  std::optional<double> delta_cap;
};

struct FaultPlan {
  std::vector<CrashEntry> crashes;
  std::vector<ByzantineEntry> byzantine;
  std::size_t f = 0;

  /// Throws std::invalid_argument when the plan does not fit n robots.
  void validate(std::size_t n) const;
  bool is_byzantine(RobotId r) const;
  const ByzantineEntry* byzantine_entry(RobotId r) const;
};

/// Marks robots whose crash step equals `step` as crashed. Byzantine and already
/// crashed robots keep their status.
Configuration apply_crashes(const Configuration& config, const FaultPlan& plan, std::size_t step);

/// Scheduler bound at and above which Byzantine robots can block weak gathering.
std::size_t byz_k_threshold(std::size_t n, std::size_t f);

struct ByzantineDecision {
  std::optional<Point> target;  ///< nullopt means stay
  std::string note;
};

/// Everything a Byzantine strategy may look at besides the current configuration.
struct ByzantineContext {
  std::span<const Configuration> past;  ///< configurations before the current one, oldest first
  const ActivationHistory* history = nullptr;
  std::size_t script_index = 0;
  std::vector<Point> gathering_points;  ///< distinct gathering locations seen so far, oldest first
  double eps = kEpsSnap;
};

ByzantineDecision byz_decide(const ByzantineStrategy& strategy, const Configuration& config,
                             RobotId robot, const ByzantineContext& ctx = {});

/// Per-run state for the Byzantine robots of one simulation.
class ByzantineController {
 public:
  ByzantineController(const FaultPlan& plan, double eps);

  ByzantineDecision decide(RobotId robot, const Configuration& config,
                           std::span<const Configuration> past,
                           const ActivationHistory& history) const;
  bool ready(RobotId robot, const Configuration& config, std::span<const Configuration> past,
             const ActivationHistory& history) const;
  /// Called after the robot's decision was executed.
  void commit(RobotId robot);
  /// Called once per configuration so gatherings can be remembered.
  void observe(const Configuration& config);

  const std::vector<std::string>& notes() const { return notes_; }
  void note(std::string text) { notes_.push_back(std::move(text)); }

 private:
  ByzantineContext context_for(RobotId robot, std::span<const Configuration> past,
                               const ActivationHistory& history) const;

  std::vector<ByzantineEntry> entries_;
  std::vector<std::size_t> script_index_;
  std::vector<Point> gathering_points_;
  std::vector<std::string> notes_;
  double eps_;
};

}  // namespace gather
