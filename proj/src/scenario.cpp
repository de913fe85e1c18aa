#include "gather/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gather {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& s, std::string_view key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "' for " + std::string(key));
  }
}

std::uint64_t to_u64(const std::string& s, std::string_view key) {
  try {
    std::size_t used = 0;
    if (!s.empty() && s[0] == '-') throw std::invalid_argument(s);
    const auto v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + s + "' for " + std::string(key));
  }
}

bool to_bool(const std::string& s, std::string_view key) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw std::invalid_argument("bad boolean '" + s + "' for " + std::string(key));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<ActivationSet> parse_script(const std::string& value) {
  const auto w = words(value);
  if (w.size() == 2 && w[0] == "cycle") return {};  // resolved once n is known
  std::vector<ActivationSet> script;
  ActivationSet current;
  for (const auto& token : w) {
    if (token == "|") {
      script.push_back(current);
      current.clear();
    } else {
      current.push_back(RobotId{to_u64(token, "script")});
    }
  }
  script.push_back(current);
  for (auto& s : script) {
    if (s.empty()) throw std::invalid_argument("script contains an empty activation set");
    std::sort(s.begin(), s.end());
  }
  return script;
}

ByzantineEntry parse_byzantine(const std::vector<std::string>& w) {
  if (w.size() < 2) throw std::invalid_argument("byzantine needs: <robot> <strategy> [params]");
  ByzantineEntry e;
  e.robot = RobotId{to_u64(w[0], "byzantine")};
  std::vector<std::string> params(w.begin() + 2, w.end());
  if (params.size() >= 2 && params[params.size() - 2] == "reach") {
    e.delta_cap = to_double(params.back(), "byzantine reach");
    params.resize(params.size() - 2);
  }
  const std::string& name = w[1];
  if (name == "attractor") {
    Attractor a;
    if (!params.empty()) a.bait_fraction = to_double(params[0], "attractor");
    e.strategy = a;
  } else if (name == "gathered-breaker") {
    GatheredBreaker g;
    if (!params.empty()) g.distance = to_double(params[0], "gathered-breaker");
    e.strategy = g;
  } else if (name == "balancer") {
    e.strategy = Balancer{};
  } else if (name == "switch") {
    if (params.size() != 1) throw std::invalid_argument("switch needs the designated robot");
    e.strategy = Switch{RobotId{to_u64(params[0], "switch")}};
  } else if (name == "scripted") {
    if (params.size() % 2 != 0) throw std::invalid_argument("scripted needs x y pairs");
    ScriptedMoves s;
    for (std::size_t i = 0; i < params.size(); i += 2)
      s.targets.emplace_back(to_double(params[i], "scripted"), to_double(params[i + 1], "scripted"));
    e.strategy = s;
  } else {
    throw std::invalid_argument("unknown Byzantine strategy '" + name + "'");
  }
  return e;
}

std::string byzantine_text(const ByzantineEntry& e) {
  std::string out = std::to_string(e.robot.index) + " " + strategy_name(e.strategy);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Attractor>) out += " " + fmt(s.bait_fraction);
        if constexpr (std::is_same_v<T, GatheredBreaker>) out += " " + fmt(s.distance);
        if constexpr (std::is_same_v<T, Switch>) out += " " + std::to_string(s.designated.index);
        if constexpr (std::is_same_v<T, ScriptedMoves>)
          for (const auto& p : s.targets) out += " " + fmt(p.x()) + " " + fmt(p.y());
      },
      e.strategy);
  if (e.delta_cap) out += " reach " + fmt(*e.delta_cap);
  return out;
}

}  // namespace

std::string_view to_string(Goal goal) {
  switch (goal) {
    case Goal::Strong: return "strong";
    case Goal::Weak: return "weak";
    case Goal::Recurrence: return "recurrence";
    case Goal::None: return "none";
  }
  return "unknown";
}

Goal parse_goal(std::string_view text) {
  for (auto g : {Goal::Strong, Goal::Weak, Goal::Recurrence, Goal::None})
    if (to_string(g) == text) return g;
  throw std::invalid_argument("unknown goal '" + std::string(text) + "'");
}

std::string_view to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::None: return "none";
    case AdversaryKind::Derandomizer: return "derandomizer";
    case AdversaryKind::Swap: return "swap";
    case AdversaryKind::Byzantine: return "byzantine";
  }
  return "unknown";
}

AdversaryKind parse_adversary(std::string_view text) {
  for (auto k : {AdversaryKind::None, AdversaryKind::Derandomizer, AdversaryKind::Swap,
                 AdversaryKind::Byzantine})
    if (to_string(k) == text) return k;
  throw std::invalid_argument("unknown adversary '" + std::string(text) + "'");
}

void Scenario::validate() const {
  const std::size_t count = n();
  if (count == 0) throw std::invalid_argument("scenario has no robots");
  if (random_robots && !robots.empty())
    throw std::invalid_argument("use either robot lines or random_robots, not both");
  if (random_robots && !(random_robots->hi > random_robots->lo))
    throw std::invalid_argument("random_robots needs lo < hi");
  for (const auto& r : robots) {
    if (!geometry::is_finite(r.position)) throw std::invalid_argument("robot position is not finite");
    if (!(r.delta_r > 0.0)) throw std::invalid_argument("robot reach must be positive");
  }
  if (random_robots && !(random_robots->delta_r > 0.0))
    throw std::invalid_argument("robot reach must be positive");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (!(eps_snap > 0.0)) throw std::invalid_argument("eps_snap must be positive");
  faults.validate(count);
  if (scheduler.k == 0) throw std::invalid_argument("k must be at least 1");
  if (scheduler.kind == SchedulerKind::RoundRobin && !scheduler.order.empty()) {
    auto sorted = scheduler.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i].index != i || sorted.size() != count)
        throw std::invalid_argument("round-robin order must be a permutation of the robots");
  }
  if (scheduler.kind == SchedulerKind::Scripted) {
    if (scheduler.script.empty()) throw std::invalid_argument("scripted scheduler needs a script");
    for (const auto& s : scheduler.script)
      for (RobotId r : s)
        if (r.index >= count) throw std::invalid_argument("script names an unknown robot");
  }
  if (algorithm == AlgorithmKind::TwoRobotDet && count != 2)
    throw std::invalid_argument("two-robot algorithm needs exactly two robots");
  if (adversary == AdversaryKind::Derandomizer && target_policy != "round-robin" &&
      target_policy != "swap")
    throw std::invalid_argument("target_policy must be round-robin or swap");
  if (adversary == AdversaryKind::Byzantine && faults.byzantine.empty())
    throw std::invalid_argument("byzantine adversary needs Byzantine robots");
}

Configuration Scenario::initial_configuration() const {
  Configuration c;
  if (random_robots) {
    RandomSource rng = RandomSource::substream(seed, "placement");
    for (std::size_t i = 0; i < random_robots->count; ++i) {
      RobotState r;
      r.position = Point(rng.uniform(random_robots->lo, random_robots->hi),
                         rng.uniform(random_robots->lo, random_robots->hi));
      r.delta_r = random_robots->delta_r;
      c.robots.push_back(r);
    }
  } else {
    for (const auto& spec : robots) {
      RobotState r;
      r.position = spec.position;
      r.delta_r = spec.delta_r;
      c.robots.push_back(r);
    }
  }
  for (const auto& b : faults.byzantine) {
    RobotState& r = c[b.robot];
    r.status = RobotStatus::Byzantine;
    r.delta_r = b.delta_cap.value_or(std::numeric_limits<double>::infinity());
  }
  return c;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::optional<std::string> cycle_mode;
  std::optional<std::size_t> declared_f;

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string content = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (content.empty()) continue;
    if (!header) {
      if (content != kScenarioHeader)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected header '" +
                                    std::string(kScenarioHeader) + "'");
      header = true;
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const auto w = words(value);
    try {
      if (key == "name") {
        s.name = value;
      } else if (key == "algorithm") {
        s.algorithm = parse_algorithm(value);
      } else if (key == "multiplicity") {
        s.multiplicity = to_bool(value, key) ? MultiplicityMode::WithMultiplicity
                                              : MultiplicityMode::WithoutMultiplicity;
      } else if (key == "blocked_rule") {
        s.options.blocked_rule = parse_blocked_rule(value);
      } else if (key == "scheduler") {
        SchedulerSpec parsed = parse_scheduler(value);
        s.scheduler.kind = parsed.kind;
        if (value == "two-bounded-centralized") s.scheduler.k = 2;
      } else if (key == "k") {
        s.scheduler.k = to_u64(value, key);
      } else if (key == "window") {
        s.scheduler.window = to_u64(value, key);
      } else if (key == "order") {
        s.scheduler.order.clear();
        for (const auto& t : w) s.scheduler.order.push_back(RobotId{to_u64(t, key)});
      } else if (key == "script") {
        if (w.size() == 2 && w[0] == "cycle") cycle_mode = w[1];
        s.scheduler.script = parse_script(value);
      } else if (key == "starvation_cap") {
        s.scheduler.starvation_cap = to_u64(value, key);
      } else if (key == "adversary") {
        s.adversary = parse_adversary(value);
      } else if (key == "target_policy") {
        s.target_policy = value;
      } else if (key == "seed") {
        s.seed = to_u64(value, key);
      } else if (key == "max_steps") {
        s.max_steps = to_u64(value, key);
      } else if (key == "eps_snap") {
        s.eps_snap = to_double(value, key);
      } else if (key == "goal") {
        s.goal = parse_goal(value);
      } else if (key == "recurrence") {
        if (value == "off") s.recurrence.reset();
        else s.recurrence = parse_recurrence_mode(value);
      } else if (key == "stop_on_recurrence") {
        s.stop_on_recurrence = to_bool(value, key);
      } else if (key == "record_metrics") {
        s.record_metrics = to_bool(value, key);
      } else if (key == "robot") {
        if (w.size() != 3) throw std::invalid_argument("robot needs: x y delta");
        s.robots.push_back({Point(to_double(w[0], key), to_double(w[1], key)), to_double(w[2], key)});
      } else if (key == "random_robots") {
        if (w.size() != 4) throw std::invalid_argument("random_robots needs: count lo hi delta");
        s.random_robots = RandomPlacement{to_u64(w[0], key), to_double(w[1], key),
                                          to_double(w[2], key), to_double(w[3], key)};
      } else if (key == "crash") {
        if (w.size() != 2) throw std::invalid_argument("crash needs: robot step");
        s.faults.crashes.push_back({RobotId{to_u64(w[0], key)}, to_u64(w[1], key)});
      } else if (key == "byzantine") {
        s.faults.byzantine.push_back(parse_byzantine(w));
      } else if (key == "f") {
        declared_f = to_u64(value, key);
      } else if (key == "expect") {
        s.expect = value;
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header) throw std::invalid_argument("missing header '" + std::string(kScenarioHeader) + "'");
  if (cycle_mode) {
    const CycleMode mode = *cycle_mode == "grouped" ? CycleMode::Grouped
                           : *cycle_mode == "round-robin"
                               ? CycleMode::RoundRobin
                               : throw std::invalid_argument("cycle mode must be grouped or round-robin");
    s.scheduler.script = scripted_cycle_schedule(s.n(), mode);
  }
  s.faults.f = declared_f.value_or(s.faults.crashes.size() + s.faults.byzantine.size());
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_text(const Scenario& s) {
  std::ostringstream out;
  out << kScenarioHeader << "\n";
  out << "name = " << s.name << "\n";
  out << "algorithm = " << to_string(s.algorithm) << "\n";
  if (s.multiplicity)
    out << "multiplicity = " << (*s.multiplicity == MultiplicityMode::WithMultiplicity ? "on" : "off") << "\n";
  out << "blocked_rule = " << to_string(s.options.blocked_rule) << "\n";
  out << "scheduler = " << to_string(s.scheduler.kind) << "\n";
  out << "k = " << s.scheduler.k << "\n";
  if (s.scheduler.window) out << "window = " << *s.scheduler.window << "\n";
  if (!s.scheduler.order.empty()) {
    out << "order =";
    for (RobotId r : s.scheduler.order) out << " " << r.index;
    out << "\n";
  }
  if (!s.scheduler.script.empty()) {
    out << "script =";
    for (std::size_t i = 0; i < s.scheduler.script.size(); ++i) {
      if (i > 0) out << " |";
      for (RobotId r : s.scheduler.script[i]) out << " " << r.index;
    }
    out << "\n";
  }
  out << "starvation_cap = " << s.scheduler.starvation_cap << "\n";
  out << "adversary = " << to_string(s.adversary) << "\n";
  if (s.adversary == AdversaryKind::Derandomizer) out << "target_policy = " << s.target_policy << "\n";
  out << "seed = " << s.seed << "\n";
  out << "max_steps = " << s.max_steps << "\n";
  out << "eps_snap = " << fmt(s.eps_snap) << "\n";
  out << "goal = " << to_string(s.goal) << "\n";
  out << "recurrence = " << (s.recurrence ? std::string(to_string(*s.recurrence)) : "off") << "\n";
  out << "stop_on_recurrence = " << (s.stop_on_recurrence ? "true" : "false") << "\n";
  if (s.record_metrics) out << "record_metrics = true\n";
  for (const auto& r : s.robots)
    out << "robot = " << fmt(r.position.x()) << " " << fmt(r.position.y()) << " " << fmt(r.delta_r) << "\n";
  if (s.random_robots)
    out << "random_robots = " << s.random_robots->count << " " << fmt(s.random_robots->lo) << " "
        << fmt(s.random_robots->hi) << " " << fmt(s.random_robots->delta_r) << "\n";
  for (const auto& c : s.faults.crashes) out << "crash = " << c.robot.index << " " << c.step << "\n";
  for (const auto& b : s.faults.byzantine) out << "byzantine = " << byzantine_text(b) << "\n";
  out << "f = " << s.faults.f << "\n";
  if (s.expect) out << "expect = " << *s.expect << "\n";
  return out.str();
}

}  // namespace gather
