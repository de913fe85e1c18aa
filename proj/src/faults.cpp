#include "gather/faults.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace gather {

namespace {

const Location* location_of(const std::vector<Location>& locations, RobotId r) {
  for (const auto& l : locations)
    if (std::find(l.members.begin(), l.members.end(), r) != l.members.end()) return &l;
  return nullptr;
}

// Step of the latest activation of r, or -1.
long long last_activation(const ActivationHistory* history, RobotId r) {
  if (!history) return -1;
  for (std::size_t t = history->size(); t-- > 0;) {
    const auto& set = (*history)[t];
    if (std::find(set.begin(), set.end(), r) != set.end()) return static_cast<long long>(t);
  }
  return -1;
}

ByzantineDecision decide_balancer(const Configuration& config, RobotId robot, double eps) {
  const auto locations = group_locations(config, eps);
  if (locations.size() != 2) return {std::nullopt, "balancer: configuration is not bivalent"};
  const Location* own = location_of(locations, robot);
  const Location* other = own == &locations[0] ? &locations[1] : &locations[0];
  if (own->multiplicity() > other->multiplicity()) return {other->point, ""};
  return {std::nullopt, ""};
}

ByzantineDecision decide_switch(const Switch& s, const Configuration& config, RobotId robot,
                                double eps) {
  const auto locations = group_locations(config, eps);
  if (locations.size() != 2) return {std::nullopt, "switch: configuration is not bivalent"};
  const Location* own = location_of(locations, robot);
  const Location* other = own == &locations[0] ? &locations[1] : &locations[0];
  const std::size_t half_up = (config.size() + 1) / 2;

  if (robot != s.designated) {
    if (own->multiplicity() > other->multiplicity() && own->multiplicity() > half_up)
      return {other->point, ""};
    return {std::nullopt, ""};
  }
  std::size_t others = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const RobotId r{i};
    if (r == robot || !config[r].byzantine()) continue;
    ++others;
    if (location_of(locations, r) == own) return {std::nullopt, ""};
  }
  if (others == 0) return {std::nullopt, "switch: no other Byzantine robot"};
  return {other->point, ""};
}

ByzantineDecision decide_attractor(const Attractor& a, const Configuration& config, RobotId robot,
                                   const ByzantineContext& ctx) {
  const Point here = config[robot].position;
  bool joined = false;
  for (const auto& r : config.robots)
    joined = joined || (r.correct() && (r.position - here).norm() <= ctx.eps);
  if (!joined) return {std::nullopt, ""};

  std::optional<RobotId> victim;
  long long victim_last = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const RobotId r{i};
    if (!config[r].correct() || (config[r].position - here).norm() <= ctx.eps) continue;
    const long long last = last_activation(ctx.history, r);
    if (!victim || last < victim_last) victim = r, victim_last = last;
  }
  if (!victim) return {std::nullopt, "attractor: every correct robot already joined"};

  const Point current = config[*victim].position;
  for (std::size_t t = ctx.past.size(); t-- > 0;) {
    const Point before = ctx.past[t][*victim].position;
    if ((before - current).norm() > ctx.eps) return {before, ""};
  }
  // The victim never moved: bait it from slightly closer to everyone else.
  Point centroid = Point::Zero();
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (RobotId{i} == *victim) continue;
    centroid += config.robots[i].position;
    const double d = (config.robots[i].position - current).norm();
    if (d > ctx.eps) nearest = std::min(nearest, d);
  }
  centroid /= static_cast<double>(config.size() - 1);
  const Point toward = centroid - current;
  if (toward.norm() <= ctx.eps || !std::isfinite(nearest))
    return {std::nullopt, "attractor: no bait direction"};
  return {Point(current + a.bait_fraction * nearest * toward.normalized()), ""};
}

ByzantineDecision decide_breaker(const GatheredBreaker& g, const Configuration& config,
                                 RobotId robot, const ByzantineContext& ctx) {
  if (is_gathered(config, ctx.eps) == GatherState::No) return {std::nullopt, ""};
  Point gathered_at = config[robot].position;
  for (const auto& r : config.robots)
    if (r.correct()) gathered_at = r.position;
  if ((config[robot].position - gathered_at).norm() > ctx.eps) return {std::nullopt, ""};
  for (auto it = ctx.gathering_points.rbegin(); it != ctx.gathering_points.rend(); ++it)
    if ((*it - gathered_at).norm() > ctx.eps) return {*it, ""};
  return {Point(gathered_at + Point(g.distance, 0.0)), ""};
}

}  // namespace

std::string strategy_name(const ByzantineStrategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Attractor>) return "attractor";
        if constexpr (std::is_same_v<T, GatheredBreaker>) return "gathered-breaker";
        if constexpr (std::is_same_v<T, Balancer>) return "balancer";
        if constexpr (std::is_same_v<T, Switch>) return "switch";
        if constexpr (std::is_same_v<T, ScriptedMoves>) return "scripted";
      },
      strategy);
}

void FaultPlan::validate(std::size_t n) const {
  std::set<std::size_t> seen;
  for (const auto& c : crashes) {
    if (c.robot.index >= n) throw std::invalid_argument("crash entry for unknown robot");
    if (!seen.insert(c.robot.index).second)
      throw std::invalid_argument("robot " + std::to_string(c.robot.index) + " listed twice in the fault plan");
  }
  for (const auto& b : byzantine) {
    if (b.robot.index >= n) throw std::invalid_argument("Byzantine entry for unknown robot");
    if (!seen.insert(b.robot.index).second)
      throw std::invalid_argument("robot " + std::to_string(b.robot.index) + " listed twice in the fault plan");
    if (b.delta_cap && !(*b.delta_cap > 0.0)) throw std::invalid_argument("Byzantine reach must be positive");
  }
  if (seen.size() > f) throw std::invalid_argument("fault plan exceeds the fault budget f");
  if (f >= n) throw std::invalid_argument("fault budget f must be smaller than n");
}

bool FaultPlan::is_byzantine(RobotId r) const { return byzantine_entry(r) != nullptr; }

const ByzantineEntry* FaultPlan::byzantine_entry(RobotId r) const {
  for (const auto& b : byzantine)
    if (b.robot == r) return &b;
  return nullptr;
}

Configuration apply_crashes(const Configuration& config, const FaultPlan& plan, std::size_t step) {
  Configuration out = config;
  for (const auto& c : plan.crashes) {
    if (c.step != step) continue;
    RobotState& r = out[c.robot];
    if (r.correct()) {
      r.status = RobotStatus::Crashed;
      r.crashed_at = step;
    }
  }
  return out;
}

std::size_t byz_k_threshold(std::size_t n, std::size_t f) {
  auto ceil_div = [](std::size_t a, std::size_t b) { return (a + b - 1) / b; };
  if (f >= n) throw std::invalid_argument("threshold undefined: f must be smaller than n");
  if (n % 2 == 0) {
    if (f < 1) throw std::invalid_argument("threshold undefined: even n needs f >= 1");
    return ceil_div(n - f, f);
  }
  if (f < 2) throw std::invalid_argument("threshold undefined: odd n needs f >= 2");
  return ceil_div(n - f, f - 1);
}

ByzantineDecision byz_decide(const ByzantineStrategy& strategy, const Configuration& config,
                             RobotId robot, const ByzantineContext& ctx) {
  if (!config[robot].byzantine()) throw std::invalid_argument("robot is not Byzantine");
  return std::visit(
      [&](const auto& s) -> ByzantineDecision {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Balancer>) return decide_balancer(config, robot, ctx.eps);
        if constexpr (std::is_same_v<T, Switch>) return decide_switch(s, config, robot, ctx.eps);
        if constexpr (std::is_same_v<T, Attractor>) return decide_attractor(s, config, robot, ctx);
        if constexpr (std::is_same_v<T, GatheredBreaker>) return decide_breaker(s, config, robot, ctx);
        if constexpr (std::is_same_v<T, ScriptedMoves>) {
          if (ctx.script_index < s.targets.size()) return {s.targets[ctx.script_index], ""};
          return {std::nullopt, ""};
        }
      },
      strategy);
}

ByzantineController::ByzantineController(const FaultPlan& plan, double eps)
    : entries_(plan.byzantine), script_index_(plan.byzantine.size(), 0), eps_(eps) {}

ByzantineContext ByzantineController::context_for(RobotId robot,
                                                  std::span<const Configuration> past,
                                                  const ActivationHistory& history) const {
  ByzantineContext ctx;
  ctx.past = past;
  ctx.history = &history;
  ctx.gathering_points = gathering_points_;
  ctx.eps = eps_;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].robot == robot) ctx.script_index = script_index_[i];
  return ctx;
}

ByzantineDecision ByzantineController::decide(RobotId robot, const Configuration& config,
                                              std::span<const Configuration> past,
                                              const ActivationHistory& history) const {
  for (const auto& e : entries_)
    if (e.robot == robot) return byz_decide(e.strategy, config, robot, context_for(robot, past, history));
  throw std::invalid_argument("robot has no Byzantine strategy");
}

bool ByzantineController::ready(RobotId robot, const Configuration& config,
                                std::span<const Configuration> past,
                                const ActivationHistory& history) const {
  const auto d = decide(robot, config, past, history);
  return d.target && (*d.target - config[robot].position).norm() > eps_;
}

void ByzantineController::commit(RobotId robot) {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].robot == robot) ++script_index_[i];
}

void ByzantineController::observe(const Configuration& config) {
  if (is_gathered(config, eps_) == GatherState::No) return;
  for (const auto& r : config.robots) {
    if (!r.correct()) continue;
    if (gathering_points_.empty() || (gathering_points_.back() - r.position).norm() > eps_)
      gathering_points_.push_back(r.position);
    return;
  }
}

}  // namespace gather
