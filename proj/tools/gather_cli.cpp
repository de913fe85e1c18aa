// Command-line front end for the gathering simulator.
#include "gather/analytic.hpp"
#include "gather/catalog.hpp"
#include "gather/engine.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace gather;

constexpr int kExitScenarioError = 1;
constexpr int kExitAssertFailure = 2;

Scenario load(const std::string& source) {
  constexpr std::string_view prefix = "catalog:";
  if (source.rfind(prefix, 0) == 0) return catalog_scenario(source.substr(prefix.size()));
  return load_scenario(source);
}

std::filesystem::path output_dir() {
  const char* dir = std::getenv("GATHER_OUT_DIR");
  return dir && *dir ? std::filesystem::path(dir) : std::filesystem::current_path();
}

struct RunOptions {
  std::string source;
  std::optional<std::string> trace_path;
  bool no_trace = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_steps;
  bool assert_expect = false;
};

int cmd_run(const RunOptions& opt) {
  Scenario scenario = load(opt.source);
  if (opt.seed) scenario.seed = *opt.seed;
  if (opt.max_steps) scenario.max_steps = *opt.max_steps;
  scenario.record_trace = !opt.no_trace;
  const RunResult result = run(scenario);

  if (result.outcome.kind == OutcomeKind::Recurrence && result.outcome.recurrence)
    std::cout << "Recurrence period " << result.outcome.recurrence->period << " groups\n";
  write_summary(std::cout, scenario, result);

  if (!opt.no_trace) {
    const std::filesystem::path path =
        opt.trace_path ? std::filesystem::path(*opt.trace_path) : output_dir() / (scenario.name + "-trace.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file " + path.string());
    write_trace_csv(out, result.trace);
    std::cout << "trace: " << path.string() << "\n";
  }

  if (opt.assert_expect) {
    bool ok = result.schedule_check.ok;
    if (scenario.expect) ok = ok && *scenario.expect == to_string(result.outcome.kind);
    if (!ok) {
      std::cerr << "assertion failed: expected " << scenario.expect.value_or("a valid schedule") << ", got "
                << to_string(result.outcome.kind)
                << (result.schedule_check.ok ? "" : " (" + result.schedule_check.message + ")") << "\n";
      return kExitAssertFailure;
    }
  }
  return 0;
}

int cmd_montecarlo(const std::string& source, std::size_t repeats, std::uint64_t stride, std::size_t threads,
                   std::optional<std::uint64_t> seed) {
  Scenario scenario = load(source);
  if (seed) scenario.seed = *seed;
  const Stats stats = monte_carlo(scenario, repeats, stride, threads);
  write_stats(std::cout, scenario, stats);
  return 0;
}

int cmd_validate(const std::string& trace_path, const std::string& kind, std::optional<std::size_t> k,
                 std::optional<std::size_t> window, const std::vector<std::size_t>& order) {
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot read trace file " + trace_path);
  const auto trace = read_trace_csv(in);
  std::size_t n = 0;
  for (const auto& row : trace) n = std::max(n, row.robot.index + 1);

  SchedulerSpec spec = parse_scheduler(kind);
  if (k) spec.k = *k;
  spec.window = window;
  for (auto i : order) spec.order.push_back(RobotId{i});
  const auto report = validate_history(spec, history_from_trace(trace), n);
  if (report.ok) {
    std::cout << "ok\n";
    return 0;
  }
  std::cout << "violation at step " << report.step.value_or(0) << ": " << report.message << "\n";
  return kExitAssertFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verification harness for gathering of oblivious mobile robots"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario (file path or catalog:<name>)");
  run_cmd->add_option("scenario", run_opt.source, "Scenario file or catalog:<name>")->required();
  run_cmd->add_option("--trace", run_opt.trace_path, "Trace CSV output path");
  run_cmd->add_flag("--no-trace", run_opt.no_trace, "Do not record or write a trace");
  run_cmd->add_option("--seed", run_opt.seed, "Override the scenario seed");
  run_cmd->add_option("--max-steps", run_opt.max_steps, "Override the step budget");
  run_cmd->add_flag("--assert", run_opt.assert_expect, "Exit 2 unless the expected outcome is reached");

  std::string mc_source;
  std::size_t repeats = 100;
  std::uint64_t stride = 1;
  std::size_t threads = 0;
  std::optional<std::uint64_t> mc_seed;
  auto* mc_cmd = app.add_subcommand("montecarlo", "Repeat a scenario over consecutive seeds");
  mc_cmd->add_option("scenario", mc_source, "Scenario file or catalog:<name>")->required();
  mc_cmd->add_option("--repeats", repeats, "Number of runs")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--stride", stride, "Seed stride between runs");
  mc_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  mc_cmd->add_option("--seed", mc_seed, "Override the base seed");

  std::string trace_path, sched_kind;
  std::optional<std::size_t> val_k, val_window;
  std::vector<std::size_t> val_order;
  auto* val_cmd = app.add_subcommand("validate", "Check a trace's activation sets against a scheduler class");
  val_cmd->add_option("trace", trace_path, "Trace CSV")->required();
  val_cmd->add_option("--scheduler", sched_kind, "Scheduler kind")->required();
  val_cmd->add_option("--k", val_k, "Bound for k-bounded kinds");
  val_cmd->add_option("--window", val_window, "Fairness window");
  val_cmd->add_option("--order", val_order, "Round-robin order");

  auto* an_cmd = app.add_subcommand("analytic", "Evaluate the closed-form probabilities");
  an_cmd->require_subcommand(1);
  std::size_t ai = 0, ao = 0, ax = 0, an = 4;
  double am = 2.0, ap = 0.25;
  auto* bal = an_cmd->add_subcommand("balance", "Balance(i, o) for multiplicity M");
  bal->add_option("--i", ai)->required();
  bal->add_option("--o", ao)->required();
  bal->add_option("--M", am)->required();
  auto* inc = an_cmd->add_subcommand("increase", "Increase(i, o, x) for multiplicity M");
  inc->add_option("--i", ai)->required();
  inc->add_option("--o", ao)->required();
  inc->add_option("--x", ax)->required();
  inc->add_option("--M", am)->required();
  auto* mk = an_cmd->add_subcommand("markov", "Castle-count chain absorption");
  mk->add_option("--n", an)->required();
  mk->add_option("--p", ap)->required();

  auto* cat_cmd = app.add_subcommand("catalog", "List built-in scenarios");
  bool show_text = false;
  std::string cat_name;
  cat_cmd->add_option("name", cat_name, "Print the scenario file of one entry");
  cat_cmd->add_flag("--text", show_text, "Print scenario files of all entries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run_opt);
    if (*mc_cmd) return cmd_montecarlo(mc_source, repeats, stride, threads, mc_seed);
    if (*val_cmd) return cmd_validate(trace_path, sched_kind, val_k, val_window, val_order);
    if (*bal) {
      std::printf("balance: %.17g\n", analytic::balance_probability(ai, ao, am));
      return 0;
    }
    if (*inc) {
      std::printf("increase: %.17g\n", analytic::increase_probability(ai, ao, ax, am));
      return 0;
    }
    if (*mk) {
      const auto result = analytic::markov_absorption(an, ap);
      std::printf("absorption: %.12f\n", result.absorption_from_start());
      std::printf("expected_steps: %.12f\n", result.expected_from_start());
      for (std::size_t s = 0; s < result.states.size(); ++s)
        std::printf("state %s: expected %.12f absorption %.12f\n", result.states[s].c_str(),
                    result.expected_steps(static_cast<Eigen::Index>(s)),
                    result.absorption(static_cast<Eigen::Index>(s)));
      return 0;
    }
    if (*cat_cmd) {
      if (!cat_name.empty()) {
        std::cout << catalog_text(cat_name);
        return 0;
      }
      for (const auto& name : catalog_names()) {
        std::cout << name << "  " << catalog_description(name) << "\n";
        if (show_text) std::cout << catalog_text(name) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitScenarioError;
  }
  return 0;
}
