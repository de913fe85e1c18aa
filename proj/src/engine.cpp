#include "gather/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gather {

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::StrongGathered: return "StrongGathered";
    case OutcomeKind::WeakGathered: return "WeakGathered";
    case OutcomeKind::Recurrence: return "Recurrence";
    case OutcomeKind::BudgetExhausted: return "BudgetExhausted";
  }
  return "unknown";
}

std::string_view to_string(TraceDecision d) {
  switch (d) {
    case TraceDecision::None: return "none";
    case TraceDecision::Stay: return "stay";
    case TraceDecision::Move: return "move";
    case TraceDecision::Final: return "final";
  }
  return "unknown";
}

TraceDecision parse_trace_decision(std::string_view text) {
  for (auto d : {TraceDecision::None, TraceDecision::Stay, TraceDecision::Move, TraceDecision::Final})
    if (to_string(d) == text) return d;
  throw std::invalid_argument("unknown decision kind '" + std::string(text) + "'");
}

namespace {

std::vector<RobotId> order_or_identity(const Scenario& s) {
  if (!s.scheduler.order.empty()) return s.scheduler.order;
  std::vector<RobotId> order(s.n());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = RobotId{i};
  return order;
}

std::unique_ptr<ActivationPolicy> make_policy(const Scenario& s) {
  const std::size_t n = s.n();
  switch (s.adversary) {
    case AdversaryKind::None:
      return make_generator(s.scheduler, n);
    case AdversaryKind::Swap:
      return make_swap_adversary(order_or_identity(s), s.eps_snap);
    case AdversaryKind::Byzantine: {
      std::optional<RobotId> switch_robot;
      for (const auto& b : s.faults.byzantine)
        if (const auto* sw = std::get_if<Switch>(&b.strategy)) switch_robot = sw->designated;
      return make_byzantine_adversary(switch_robot, s.eps_snap);
    }
    case AdversaryKind::Derandomizer: {
      auto target = s.target_policy == "swap"
                        ? make_swap_adversary(order_or_identity(s), s.eps_snap)
                        : make_generator(SchedulerSpec::round_robin(s.scheduler.order), n);
      return make_derandomizer(std::move(target), !is_deterministic(s.algorithm),
                               s.scheduler.starvation_cap);
    }
  }
  throw std::logic_error("unknown adversary");
}

// Replaces a target lying within eps of an occupied location by that location's
// exact coordinates, so arrivals produce exact colocation.
Point snap_target(const Point& target, const std::vector<Location>& locations, double eps) {
  for (const auto& l : locations)
    if ((l.point - target).norm() <= eps) return l.point;
  return target;
}

bool goal_reached(Goal goal, GatherState state) {
  switch (goal) {
    case Goal::Strong:
    case Goal::Recurrence:
      return state == GatherState::Strong;
    case Goal::Weak:
      return state != GatherState::No;
    case Goal::None:
      return false;
  }
  return false;
}

}  // namespace

RunResult run(const Scenario& scenario) {
  scenario.validate();
  const std::size_t n = scenario.n();
  const double eps = scenario.eps_snap;
  const MultiplicityMode mode = scenario.multiplicity_mode();

  RandomSource sched_rng = RandomSource::substream(scenario.seed, "scheduler");
  RandomSource frame_rng = RandomSource::substream(scenario.seed, "frames");
  std::vector<RandomSource> coins;
  coins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) coins.push_back(RandomSource::substream(scenario.seed, "coins", i));

  auto policy = make_policy(scenario);
  ByzantineController byz(scenario.faults, eps);
  const bool has_byzantine = !scenario.faults.byzantine.empty();
  const bool keep_configs = scenario.record_trace || has_byzantine;

  std::optional<RecurrenceDetector> detector;
  if (scenario.recurrence) detector.emplace(eps, *scenario.recurrence);

  RunResult result;
  Configuration config = scenario.initial_configuration();
  std::vector<Configuration> past;

  for (std::size_t t = 0;; ++t) {
    config = apply_crashes(config, scenario.faults, t);
    config.step = t;
    if (keep_configs) past.push_back(config);
    if (has_byzantine) byz.observe(config);
    if (scenario.record_metrics) result.metrics_series.push_back(metrics(config, eps));

    const GatherState state = is_gathered(config, eps);
    if (goal_reached(scenario.goal, state)) {
      result.outcome.kind = state == GatherState::Strong ? OutcomeKind::StrongGathered
                                                         : OutcomeKind::WeakGathered;
      result.outcome.step = t;
      break;
    }
    if (detector) {
      if (auto rec = detector->push(config, policy->state_key())) {
        if (!result.first_recurrence) result.first_recurrence = rec;
        if (scenario.stop_on_recurrence) {
          result.outcome.kind = OutcomeKind::Recurrence;
          result.outcome.step = t;
          result.outcome.recurrence = rec;
          break;
        }
      }
    }
    if (t >= scenario.max_steps) {
      result.outcome.kind = OutcomeKind::BudgetExhausted;
      result.outcome.step = t;
      break;
    }

    const std::span<const Configuration> before(past.data(), past.empty() ? 0 : past.size() - 1);
    SchedulerContext ctx{config, result.history, [&](RobotId r) {
                           return byz.ready(r, config, before, result.history);
                         }};
    ActivationSet active = policy->choose(ctx, sched_rng);
    std::sort(active.begin(), active.end());

    const auto locations = group_locations(config, eps);
    std::vector<Move> moves;
    std::vector<TraceDecision> decisions(n, TraceDecision::None);
    std::vector<std::optional<Point>> targets(n);
    for (RobotId r : active) {
      if (r.index >= n) throw std::logic_error("scheduler activated an unknown robot");
      const RobotState& robot = config[r];
      if (robot.crashed()) continue;
      std::optional<Point> target;
      if (robot.byzantine()) {
        ByzantineDecision d = byz.decide(r, config, before, result.history);
        if (!d.note.empty())
          result.notes.push_back("step " + std::to_string(t) + " robot " + std::to_string(r.index) + ": " + d.note);
        target = d.target;
        byz.commit(r);
      } else {
        const ObservationFrame frame = ObservationFrame::random_at(robot.position, frame_rng);
        const Observation obs = observe(config, r, frame, mode, eps);
        const Decision d = decide(scenario.algorithm, obs, coins[r.index], scenario.options);
        if (d.moves()) target = frame.to_global(d.target);
      }
      if (target) {
        const Point snapped = snap_target(*target, locations, eps);
        moves.push_back({r, snapped});
        decisions[r.index] = TraceDecision::Move;
        targets[r.index] = snapped;
      } else {
        decisions[r.index] = TraceDecision::Stay;
      }
    }

    Configuration next = apply_moves(config, moves);
    std::vector<RobotId> moved;
    for (std::size_t i = 0; i < n; ++i)
      if (next.robots[i].position != config.robots[i].position) moved.push_back(RobotId{i});
    policy->record(active, moved);
    result.history.push_back(active);

    if (scenario.record_trace) {
      for (std::size_t i = 0; i < n; ++i) {
        TraceRecord rec;
        rec.step = t;
        rec.robot = RobotId{i};
        rec.position = config.robots[i].position;
        rec.status = config.robots[i].status;
        rec.activated = std::binary_search(active.begin(), active.end(), RobotId{i});
        rec.decision = decisions[i];
        rec.target = targets[i];
        result.trace.push_back(rec);
      }
    }
    config = std::move(next);
  }

  result.steps_executed = result.outcome.step;
  if (scenario.record_trace) {
    for (std::size_t i = 0; i < n; ++i) {
      TraceRecord rec;
      rec.step = result.steps_executed;
      rec.robot = RobotId{i};
      rec.position = config.robots[i].position;
      rec.status = config.robots[i].status;
      rec.decision = TraceDecision::Final;
      result.trace.push_back(rec);
    }
    result.configurations = std::move(past);
  }
  result.final = std::move(config);
  result.schedule_check = validate_history(scenario.scheduler, result.history, n);
  for (const auto& note : byz.notes()) result.notes.push_back(note);
  return result;
}

Stats monte_carlo(const Scenario& scenario, std::size_t repeats, std::uint64_t seed_stride,
                  std::size_t threads) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  scenario.validate();
  std::vector<Outcome> outcomes(repeats);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < repeats; i = next++) {
      Scenario s = scenario;
      s.seed = scenario.seed + i * seed_stride;
      s.record_trace = false;
      s.record_metrics = false;
      outcomes[i] = run(s).outcome;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, repeats);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Stats st;
  st.runs = repeats;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& o : outcomes) {
    ++st.outcomes[o.kind];
    if (!o.gathered()) continue;
    ++st.successes;
    sum += static_cast<double>(o.step);
  }
  if (st.successes > 0) {
    st.mean_steps = sum / static_cast<double>(st.successes);
    for (const auto& o : outcomes)
      if (o.gathered()) sum2 += std::pow(static_cast<double>(o.step) - st.mean_steps, 2);
    st.stddev = st.successes > 1 ? std::sqrt(sum2 / static_cast<double>(st.successes - 1)) : 0.0;
    st.ci95 = 1.96 * st.stddev / std::sqrt(static_cast<double>(st.successes));
  }
  st.small_sample = st.successes < 30;
  return st;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "step,robot,x,y,status,activated,decision_kind,target_x,target_y\n";
  for (const auto& r : trace) {
    out << r.step << ',' << r.robot.index << ',' << num(r.position.x()) << ',' << num(r.position.y())
        << ',' << to_string(r.status) << ',' << (r.activated ? 1 : 0) << ',' << to_string(r.decision)
        << ',';
    if (r.target) out << num(r.target->x()) << ',' << num(r.target->y());
    else out << ',';
    out << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("step,robot,x,y,status", 0) != 0)
    throw std::invalid_argument("not a trace CSV (missing header)");
  std::vector<TraceRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 9)
      throw std::invalid_argument("trace line " + std::to_string(line_no) + ": expected 9 columns");
    try {
      TraceRecord r;
      r.step = std::stoull(cells[0]);
      r.robot = RobotId{std::stoull(cells[1])};
      r.position = Point(std::stod(cells[2]), std::stod(cells[3]));
      const std::string& st = cells[4];
      r.status = st == "correct"   ? RobotStatus::Correct
                 : st == "crashed" ? RobotStatus::Crashed
                 : st == "byzantine"
                     ? RobotStatus::Byzantine
                     : throw std::invalid_argument("unknown status '" + st + "'");
      r.activated = cells[5] == "1";
      r.decision = parse_trace_decision(cells[6]);
      if (!cells[7].empty()) r.target = Point(std::stod(cells[7]), std::stod(cells[8]));
      out.push_back(r);
    } catch (const std::exception& e) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

ActivationHistory history_from_trace(const std::vector<TraceRecord>& trace) {
  ActivationHistory history;
  for (const auto& r : trace) {
    if (r.decision == TraceDecision::Final) continue;
    if (r.step >= history.size()) history.resize(r.step + 1);
    if (r.activated) history[r.step].push_back(r.robot);
  }
  for (auto& set : history) std::sort(set.begin(), set.end());
  return history;
}

void write_summary(std::ostream& out, const Scenario& scenario, const RunResult& result) {
  const Metrics m = metrics(result.final, scenario.eps_snap);
  out << "name: " << scenario.name << "\n";
  out << "algorithm: " << to_string(scenario.algorithm) << "\n";
  out << "scheduler: " << to_string(scenario.scheduler.kind) << "\n";
  out << "adversary: " << to_string(scenario.adversary) << "\n";
  out << "robots: " << scenario.n() << "\n";
  out << "seed: " << scenario.seed << "\n";
  out << "outcome: " << to_string(result.outcome.kind) << "\n";
  out << "outcome_step: " << result.outcome.step << "\n";
  if (result.first_recurrence) {
    out << "recurrence_first: " << result.first_recurrence->first << "\n";
    out << "recurrence_period: " << result.first_recurrence->period << "\n";
  }
  out << "steps_executed: " << result.steps_executed << "\n";
  out << "final_valence: " << m.valence << "\n";
  out << "final_mulmax: " << m.mulmax << "\n";
  out << "final_state: " << to_string(is_gathered(result.final, scenario.eps_snap)) << "\n";
  out << "schedule_valid: " << (result.schedule_check.ok ? "yes" : "no") << "\n";
  if (!result.schedule_check.ok)
    out << "schedule_violation: step " << result.schedule_check.step.value_or(0) << ": "
        << result.schedule_check.message << "\n";
  out << "notes: " << result.notes.size() << "\n";
}

void write_stats(std::ostream& out, const Scenario& scenario, const Stats& stats) {
  out << "name: " << scenario.name << "\n";
  out << "runs: " << stats.runs << "\n";
  out << "successes: " << stats.successes << "\n";
  out << "success_rate: " << num(stats.success_rate()) << "\n";
  out << "mean_steps: " << num(stats.mean_steps) << "\n";
  out << "stddev: " << num(stats.stddev) << "\n";
  out << "ci95: " << num(stats.ci95) << "\n";
  out << "small_sample: " << (stats.small_sample ? "yes" : "no") << "\n";
  for (const auto& [kind, count] : stats.outcomes) out << "outcome_" << to_string(kind) << ": " << count << "\n";
}

}  // namespace gather
