#pragma once

#include "gather/model.hpp"
#include "gather/random.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gather {

enum class SchedulerKind {
  UnfairArbitrary,
  UnfairCentralized,
  FairArbitrary,
  FairCentralized,
  FairKBounded,
  KBoundedCentralized,
  RoundRobin,
  FullySynchronous,
  Scripted,
};

/// Sorted, duplicate-free set of robots activated in one step.
using ActivationSet = std::vector<RobotId>;
using ActivationHistory = std::vector<ActivationSet>;

struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::FairArbitrary;
  std::size_t k = 1;
  /// Maximum number of consecutive steps a robot may stay idle.
  std::optional<std::size_t> window;
  std::vector<RobotId> order;
  std::vector<ActivationSet> script;
  std::size_t starvation_cap = 10000;

  static SchedulerSpec round_robin(std::vector<RobotId> order = {});
  static SchedulerSpec k_bounded_centralized(std::size_t k);
  static SchedulerSpec two_bounded_centralized() { return k_bounded_centralized(2); }
  static SchedulerSpec fair_k_bounded(std::size_t k);
  static SchedulerSpec scripted(std::vector<ActivationSet> script);

  bool centralized() const;
  /// Window checked by the validator; nullopt means fairness is not checked.
  std::optional<std::size_t> effective_window(std::size_t n) const;
};

std::string_view to_string(SchedulerKind kind);
/// Accepts the kind names plus "two-bounded-centralized" (k-bounded centralized with k = 2).
SchedulerSpec parse_scheduler(std::string_view name);

struct ValidationReport {
  bool ok = true;
  std::optional<std::size_t> step;
  std::string message;

  explicit operator bool() const { return ok; }
  static ValidationReport violation(std::size_t step, std::string message) {
    return {false, step, std::move(message)};
  }
};

ValidationReport validate_history(const SchedulerSpec& spec, const ActivationHistory& history,
                                  std::size_t n);

/// What a scheduler may look at when choosing the next activation set.
struct SchedulerContext {
  const Configuration& config;
  const ActivationHistory& history;
  /// True when the Byzantine robot would move if activated now.
  std::function<bool(RobotId)> byzantine_ready = {};
};

/// Source of activation sets. choose() must not change state; record() is
/// called once the chosen set has been executed, with the robots that moved.
class ActivationPolicy {
 public:
  virtual ~ActivationPolicy() = default;
  virtual ActivationSet choose(const SchedulerContext& ctx, RandomSource& rng) = 0;
  virtual void record(const ActivationSet& activated, const std::vector<RobotId>& moved) = 0;
  /// Digest of the internal state that steers future choices. Two equal configurations
  /// with equal keys lead to the same activations under a deterministic policy.
  virtual std::uint64_t state_key() const { return 0; }
};

/// Random legal generator for a scheduler kind.
std::unique_ptr<ActivationPolicy> make_generator(const SchedulerSpec& spec, std::size_t n);

/// One-shot form: replays the history into a fresh generator and asks for the next set.
ActivationSet next_activation(const SchedulerSpec& spec, const ActivationHistory& history,
                              const Configuration& config, RandomSource& rng);

enum class CycleMode { Grouped, RoundRobin };

/// Periodic schedule r3..rn, r1, r2 (0-based: 2..n-1, 0, 1). Grouped mode activates
/// r3..rn together; round-robin mode activates them one at a time.
std::vector<ActivationSet> scripted_cycle_schedule(std::size_t n, CycleMode mode);

/// Re-activates the robot picked by `target` until it actually moves.
std::unique_ptr<ActivationPolicy> make_derandomizer(std::unique_ptr<ActivationPolicy> target,
                                                    bool randomized_algorithm,
                                                    std::size_t starvation_cap = 10000);

/// Round-robin over `order`; when the configuration is 1-bivalent and the next
/// robot is the lone one, it swaps places with the robot two positions earlier.
std::unique_ptr<ActivationPolicy> make_swap_adversary(std::vector<RobotId> order,
                                                      double eps = kEpsSnap);

/// Centralized adversary for Byzantine demos. Any Byzantine robot that is ready
/// acts first (non-switch robots before `switch_robot`); otherwise the least
/// recently activated correct robot in the location holding the fewest Byzantine
/// robots is activated.
std::unique_ptr<ActivationPolicy> make_byzantine_adversary(std::optional<RobotId> switch_robot,
                                                           double eps = kEpsSnap);

}  // namespace gather
