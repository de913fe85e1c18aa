#include "gather/schedulers.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gather {

namespace {

ActivationSet normalized(ActivationSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL)); }

bool contains(const ActivationSet& s, RobotId r) {
  return std::binary_search(s.begin(), s.end(), r);
}

std::vector<RobotId> all_robots(std::size_t n) {
  std::vector<RobotId> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = RobotId{i};
  return out;
}

// Bookkeeping shared by the generators: last activation step of every robot and,
// for every ordered pair (r, s), how often s ran since r last ran. Every robot is
// treated as activated at a virtual step -1.
class ActivationBook {
 public:
  explicit ActivationBook(std::size_t n) : n_(n), last_(n, -1), counts_(n * n, 0) {}

  void record(const ActivationSet& set) {
    for (std::size_t r = 0; r < n_; ++r) {
      if (contains(set, RobotId{r})) {
        std::fill_n(counts_.begin() + static_cast<std::ptrdiff_t>(r * n_), n_, 0);
        last_[r] = static_cast<long long>(step_);
      } else {
        for (RobotId s : set) ++counts_[r * n_ + s.index];
      }
    }
    ++step_;
  }

  std::size_t step() const { return step_; }
  std::size_t n() const { return n_; }
  long long last(std::size_t r) const { return last_[r]; }
  std::size_t count(std::size_t r, std::size_t s) const { return counts_[r * n_ + s]; }
  /// Steps r has been idle before the current step.
  std::size_t idle(std::size_t r) const {
    return static_cast<std::size_t>(static_cast<long long>(step_) - last_[r] - 1);
  }
  std::size_t least_recent() const {
    return static_cast<std::size_t>(std::min_element(last_.begin(), last_.end()) - last_.begin());
  }

 private:
  std::size_t n_;
  std::size_t step_ = 0;
  std::vector<long long> last_;
  std::vector<std::size_t> counts_;
};

ActivationSet random_subset(std::size_t n, RandomSource& rng) {
  ActivationSet s;
  while (s.empty())
    for (std::size_t i = 0; i < n; ++i)
      if (rng.bernoulli(0.5)) s.push_back(RobotId{i});
  return s;
}

class Generator : public ActivationPolicy {
 public:
  Generator(SchedulerSpec spec, std::size_t n) : spec_(std::move(spec)), book_(n) {
    if (n == 0) throw std::invalid_argument("scheduler needs at least one robot");
    if (spec_.order.empty()) spec_.order = all_robots(n);
    if (spec_.kind == SchedulerKind::RoundRobin) {
      auto sorted = normalized(spec_.order);
      if (sorted.size() != n || sorted.size() != spec_.order.size() || sorted.back().index >= n)
        throw std::invalid_argument("round-robin order must be a permutation of the robots");
    }
    if (spec_.kind == SchedulerKind::Scripted && spec_.script.empty())
      throw std::invalid_argument("scripted scheduler needs a non-empty script");
    if (spec_.k == 0) throw std::invalid_argument("k must be at least 1");
    if (spec_.kind == SchedulerKind::FairCentralized && spec_.window && *spec_.window + 1 < n)
      throw std::invalid_argument("fair centralized window must be at least n - 1");
  }

  ActivationSet choose(const SchedulerContext& ctx, RandomSource& rng) override {
    const std::size_t n = book_.n();
    bool any_live = false;
    for (const auto& r : ctx.config.robots) any_live = any_live || !r.crashed();
    if (!any_live) throw std::runtime_error("all robots crashed");

    switch (spec_.kind) {
      case SchedulerKind::UnfairArbitrary:
        return with_starvation_guard(random_subset(n, rng), ctx, rng);
      case SchedulerKind::UnfairCentralized: {
        ActivationSet s{RobotId{rng.below(n)}};
        if (starving(ctx)) s = {pick_correct(ctx, rng)};
        return s;
      }
      case SchedulerKind::FairArbitrary: {
        const std::size_t w = spec_.window.value_or(4 * n);
        ActivationSet s = random_subset(n, rng);
        for (std::size_t r = 0; r < n; ++r)
          if (book_.idle(r) >= w) s.push_back(RobotId{r});
        return normalized(s);
      }
      case SchedulerKind::FairCentralized:
        return {fair_centralized(rng)};
      case SchedulerKind::FairKBounded:
        return k_bounded_arbitrary(rng);
      case SchedulerKind::KBoundedCentralized: {
        std::vector<RobotId> legal;
        for (std::size_t s = 0; s < n; ++s) {
          bool ok = true;
          for (std::size_t r = 0; r < n && ok; ++r)
            if (r != s && book_.count(r, s) >= spec_.k) ok = false;
          if (ok) legal.push_back(RobotId{s});
        }
        return {legal[rng.below(legal.size())]};
      }
      case SchedulerKind::RoundRobin:
        return {spec_.order[book_.step() % spec_.order.size()]};
      case SchedulerKind::FullySynchronous:
        return all_robots(n);
      case SchedulerKind::Scripted:
        return normalized(spec_.script[book_.step() % spec_.script.size()]);
    }
    throw std::logic_error("unknown scheduler kind");
  }

  std::uint64_t state_key() const override {
    if (spec_.kind == SchedulerKind::RoundRobin) return book_.step() % spec_.order.size();
    if (spec_.kind == SchedulerKind::Scripted) return book_.step() % spec_.script.size();
    return 0;
  }

  void record(const ActivationSet& activated, const std::vector<RobotId>&) override {
    book_.record(activated);
    bool correct_ran = false;
    for (RobotId r : activated) correct_ran = correct_ran || !faulty_.count(r.index);
    since_correct_ = correct_ran ? 0 : since_correct_ + 1;
  }

 private:
  bool starving(const SchedulerContext& ctx) {
    faulty_.clear();
    for (std::size_t i = 0; i < ctx.config.size(); ++i)
      if (!ctx.config.robots[i].correct()) faulty_.insert(i);
    return since_correct_ + 1 >= spec_.starvation_cap && faulty_.size() < ctx.config.size();
  }

  RobotId pick_correct(const SchedulerContext& ctx, RandomSource& rng) const {
    std::vector<RobotId> correct;
    for (std::size_t i = 0; i < ctx.config.size(); ++i)
      if (ctx.config.robots[i].correct()) correct.push_back(RobotId{i});
    return correct[rng.below(correct.size())];
  }

  ActivationSet with_starvation_guard(ActivationSet s, const SchedulerContext& ctx,
                                      RandomSource& rng) {
    if (starving(ctx)) s.push_back(pick_correct(ctx, rng));
    return normalized(s);
  }

  // Random robot unless that would make some deadline impossible to meet;
  // in that case the earliest deadline goes first.
  RobotId fair_centralized(RandomSource& rng) const {
    const std::size_t n = book_.n();
    const std::size_t w = spec_.window.value_or(4 * n);
    auto deadline = [&](std::size_t r) { return book_.last(r) + static_cast<long long>(w) + 1; };
    auto feasible_without = [&](std::size_t chosen) {
      std::vector<long long> d;
      for (std::size_t r = 0; r < n; ++r)
        if (r != chosen) d.push_back(deadline(r));
      std::sort(d.begin(), d.end());
      const long long t = static_cast<long long>(book_.step()) + 1;
      for (std::size_t j = 0; j < d.size(); ++j)
        if (d[j] < t + static_cast<long long>(j)) return false;
      return true;
    };
    const std::size_t candidate = rng.below(n);
    if (feasible_without(candidate)) return RobotId{candidate};
    std::size_t earliest = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (deadline(r) < deadline(earliest)) earliest = r;
    return RobotId{earliest};
  }

  // Random set, then add every robot whose absence would break the bound.
  ActivationSet k_bounded_arbitrary(RandomSource& rng) const {
    const std::size_t n = book_.n();
    ActivationSet s = random_subset(n, rng);
    std::vector<bool> in(n, false);
    for (RobotId r : s) in[r.index] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t r = 0; r < n; ++r) {
        if (in[r]) continue;
        for (std::size_t x = 0; x < n; ++x) {
          if (in[x] && book_.count(r, x) >= spec_.k) {
            in[r] = true;
            changed = true;
            break;
          }
        }
      }
    }
    ActivationSet out;
    for (std::size_t r = 0; r < n; ++r)
      if (in[r]) out.push_back(RobotId{r});
    return out;
  }

  SchedulerSpec spec_;
  ActivationBook book_;
  std::size_t since_correct_ = 0;
  std::set<std::size_t> faulty_;
};

class Derandomizer : public ActivationPolicy {
 public:
  Derandomizer(std::unique_ptr<ActivationPolicy> target, bool randomized, std::size_t cap)
      : target_(std::move(target)), randomized_(randomized), cap_(cap) {}

  ActivationSet choose(const SchedulerContext& ctx, RandomSource& rng) override {
    if (!current_) {
      const ActivationSet s = target_->choose(ctx, rng);
      if (s.size() != 1) throw std::logic_error("derandomizer target policy must be centralized");
      current_ = s.front();
    }
    return {*current_};
  }

  std::uint64_t state_key() const override {
    return combine(combine(target_->state_key(), current_ ? current_->index + 1 : 0), repeats_);
  }

  void record(const ActivationSet& activated, const std::vector<RobotId>& moved) override {
    ++repeats_;
    const bool moved_now = std::find(moved.begin(), moved.end(), *current_) != moved.end();
    if (!randomized_ || moved_now || repeats_ >= cap_) {
      target_->record(activated, moved);
      current_.reset();
      repeats_ = 0;
    }
  }

 private:
  std::unique_ptr<ActivationPolicy> target_;
  bool randomized_;
  std::size_t cap_;
  std::optional<RobotId> current_;
  std::size_t repeats_ = 0;
};

class SwapAdversary : public ActivationPolicy {
 public:
  SwapAdversary(std::vector<RobotId> order, double eps) : sigma_(std::move(order)), eps_(eps) {}

  ActivationSet choose(const SchedulerContext& ctx, RandomSource&) override {
    if (sigma_.empty()) sigma_ = all_robots(ctx.config.size());
    const std::size_t n = sigma_.size();
    pending_ = sigma_;
    const auto locations = group_locations(ctx.config, eps_);
    if (n >= 3 && locations.size() == 2) {
      for (const auto& loc : locations) {
        if (loc.multiplicity() == 1 && loc.members.front() == pending_[ptr_]) {
          std::swap(pending_[ptr_], pending_[(ptr_ + n - 2) % n]);
          break;
        }
      }
    }
    return {pending_[ptr_]};
  }

  std::uint64_t state_key() const override {
    std::uint64_t h = ptr_;
    for (RobotId r : sigma_) h = combine(h, r.index);
    return h;
  }

  void record(const ActivationSet&, const std::vector<RobotId>&) override {
    sigma_ = pending_;
    ptr_ = (ptr_ + 1) % sigma_.size();
  }

 private:
  std::vector<RobotId> sigma_;
  std::vector<RobotId> pending_;
  std::size_t ptr_ = 0;
  double eps_;
};

class ByzantineAdversary : public ActivationPolicy {
 public:
  ByzantineAdversary(std::optional<RobotId> switch_robot, double eps)
      : switch_(switch_robot), eps_(eps) {}

  ActivationSet choose(const SchedulerContext& ctx, RandomSource&) override {
    const std::size_t n = ctx.config.size();
    if (last_.size() != n) last_.assign(n, -1);

    std::vector<RobotId> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (ctx.config.robots[i].byzantine() && ctx.byzantine_ready && ctx.byzantine_ready(RobotId{i}))
        ready.push_back(RobotId{i});
    if (!ready.empty()) {
      auto rank = [&](RobotId r) {
        return std::make_pair(switch_ && *switch_ == r ? 1 : 0, last_[r.index]);
      };
      return {*std::min_element(ready.begin(), ready.end(),
                                [&](RobotId a, RobotId b) { return rank(a) < rank(b); })};
    }

    const auto locations = group_locations(ctx.config, eps_);
    std::size_t fewest = SIZE_MAX;
    std::vector<RobotId> victims;
    for (const auto& loc : locations) {
      std::size_t byz = 0;
      std::vector<RobotId> correct;
      for (RobotId r : loc.members) {
        if (ctx.config[r].byzantine()) ++byz;
        if (ctx.config[r].correct()) correct.push_back(r);
      }
      if (correct.empty()) continue;
      if (byz < fewest) {
        fewest = byz;
        victims = correct;
      } else if (byz == fewest) {
        victims.insert(victims.end(), correct.begin(), correct.end());
      }
    }
    if (victims.empty()) {
      for (std::size_t i = 0; i < n; ++i)
        if (!ctx.config.robots[i].crashed()) victims.push_back(RobotId{i});
    }
    if (victims.empty()) throw std::runtime_error("all robots crashed");
    return {*std::min_element(victims.begin(), victims.end(), [&](RobotId a, RobotId b) {
      return std::make_pair(last_[a.index], a) < std::make_pair(last_[b.index], b);
    })};
  }

  // Choices depend on the recency order only. Robots never activated rank first, by id,
  // so the activated ones in recency order determine it.
  std::uint64_t state_key() const override {
    std::vector<std::size_t> order;
    for (std::size_t r = 0; r < last_.size(); ++r)
      if (last_[r] >= 0) order.push_back(r);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return last_[a] < last_[b]; });
    std::uint64_t h = 0;
    for (auto r : order) h = combine(h, r);
    return h;
  }

  void record(const ActivationSet& activated, const std::vector<RobotId>&) override {
    for (RobotId r : activated) last_[r.index] = static_cast<long long>(step_);
    ++step_;
  }

 private:
  std::optional<RobotId> switch_;
  double eps_;
  std::vector<long long> last_;
  std::size_t step_ = 0;
};

}  // namespace

SchedulerSpec SchedulerSpec::round_robin(std::vector<RobotId> order) {
  SchedulerSpec s;
  s.kind = SchedulerKind::RoundRobin;
  s.order = std::move(order);
  return s;
}

SchedulerSpec SchedulerSpec::k_bounded_centralized(std::size_t k) {
  SchedulerSpec s;
  s.kind = SchedulerKind::KBoundedCentralized;
  s.k = k;
  return s;
}

SchedulerSpec SchedulerSpec::fair_k_bounded(std::size_t k) {
  SchedulerSpec s;
  s.kind = SchedulerKind::FairKBounded;
  s.k = k;
  return s;
}

SchedulerSpec SchedulerSpec::scripted(std::vector<ActivationSet> script) {
  SchedulerSpec s;
  s.kind = SchedulerKind::Scripted;
  s.script = std::move(script);
  return s;
}

bool SchedulerSpec::centralized() const {
  return kind == SchedulerKind::UnfairCentralized || kind == SchedulerKind::FairCentralized ||
         kind == SchedulerKind::KBoundedCentralized || kind == SchedulerKind::RoundRobin;
}

std::optional<std::size_t> SchedulerSpec::effective_window(std::size_t n) const {
  if (window) return window;
  const std::size_t others = n > 0 ? n - 1 : 0;
  switch (kind) {
    case SchedulerKind::FairKBounded:
    case SchedulerKind::KBoundedCentralized:
      return k * others;
    case SchedulerKind::RoundRobin:
      return others;
    case SchedulerKind::FullySynchronous:
      return 0;
    default:
      return std::nullopt;
  }
}

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::UnfairArbitrary: return "unfair-arbitrary";
    case SchedulerKind::UnfairCentralized: return "unfair-centralized";
    case SchedulerKind::FairArbitrary: return "fair-arbitrary";
    case SchedulerKind::FairCentralized: return "fair-centralized";
    case SchedulerKind::FairKBounded: return "k-bounded";
    case SchedulerKind::KBoundedCentralized: return "k-bounded-centralized";
    case SchedulerKind::RoundRobin: return "round-robin";
    case SchedulerKind::FullySynchronous: return "fully-synchronous";
    case SchedulerKind::Scripted: return "scripted";
  }
  return "unknown";
}

SchedulerSpec parse_scheduler(std::string_view name) {
  if (name == "two-bounded-centralized") return SchedulerSpec::two_bounded_centralized();
  for (auto k : {SchedulerKind::UnfairArbitrary, SchedulerKind::UnfairCentralized,
                 SchedulerKind::FairArbitrary, SchedulerKind::FairCentralized,
                 SchedulerKind::FairKBounded, SchedulerKind::KBoundedCentralized,
                 SchedulerKind::RoundRobin, SchedulerKind::FullySynchronous,
                 SchedulerKind::Scripted}) {
    if (to_string(k) == name) {
      SchedulerSpec s;
      s.kind = k;
      return s;
    }
  }
  throw std::invalid_argument("unknown scheduler '" + std::string(name) + "'");
}

ValidationReport validate_history(const SchedulerSpec& spec, const ActivationHistory& history,
                                  std::size_t n) {
  const std::optional<std::size_t> window = spec.effective_window(n);
  std::vector<RobotId> order = spec.order;
  if (spec.kind == SchedulerKind::RoundRobin && order.empty()) {
    for (std::size_t t = 0; t < std::min(n, history.size()); ++t)
      if (history[t].size() == 1) order.push_back(history[t].front());
  }

  ActivationBook book(n);
  for (std::size_t t = 0; t < history.size(); ++t) {
    const ActivationSet& set = history[t];
    if (set.empty()) return ValidationReport::violation(t, "empty activation set");
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i].index >= n)
        return ValidationReport::violation(t, "robot " + std::to_string(set[i].index) + " out of range");
      if (i > 0 && !(set[i - 1] < set[i]))
        return ValidationReport::violation(t, "activation set not sorted or has duplicates");
    }
    if (spec.centralized() && set.size() != 1)
      return ValidationReport::violation(t, "centralized scheduler activated " +
                                                std::to_string(set.size()) + " robots");
    switch (spec.kind) {
      case SchedulerKind::FullySynchronous:
        if (set.size() != n) return ValidationReport::violation(t, "not every robot activated");
        break;
      case SchedulerKind::RoundRobin: {
        if (t < n) {
          for (std::size_t u = 0; u < t; ++u)
            if (history[u] == set)
              return ValidationReport::violation(t, "robot repeated within the first round");
        }
        if (order.size() == n && set.front() != order[t % n])
          return ValidationReport::violation(t, "out of round-robin order: expected robot " +
                                                    std::to_string(order[t % n].index));
        break;
      }
      case SchedulerKind::Scripted: {
        if (spec.script.empty()) return ValidationReport::violation(t, "empty script");
        if (normalized(spec.script[t % spec.script.size()]) != set)
          return ValidationReport::violation(t, "deviates from the script");
        break;
      }
      default:
        break;
    }
    if (spec.kind == SchedulerKind::FairKBounded || spec.kind == SchedulerKind::KBoundedCentralized) {
      for (RobotId r : set) {
        if (book.last(r.index) < 0) continue;
        for (std::size_t s = 0; s < n; ++s) {
          if (s != r.index && book.count(r.index, s) > spec.k)
            return ValidationReport::violation(
                t, "robot " + std::to_string(s) + " ran " + std::to_string(book.count(r.index, s)) +
                       " times between two activations of robot " + std::to_string(r.index) +
                       " (k = " + std::to_string(spec.k) + ")");
        }
      }
    }
    if (window) {
      for (std::size_t r = 0; r < n; ++r)
        if (!contains(set, RobotId{r}) && book.idle(r) + 1 > *window)
          return ValidationReport::violation(
              t, "robot " + std::to_string(r) + " idle longer than window " + std::to_string(*window));
    }
    book.record(set);
  }
  return {};
}

std::unique_ptr<ActivationPolicy> make_generator(const SchedulerSpec& spec, std::size_t n) {
  return std::make_unique<Generator>(spec, n);
}

ActivationSet next_activation(const SchedulerSpec& spec, const ActivationHistory& history,
                              const Configuration& config, RandomSource& rng) {
  auto gen = make_generator(spec, config.size());
  for (const auto& set : history) gen->record(set, {});
  return gen->choose({config, history}, rng);
}

std::vector<ActivationSet> scripted_cycle_schedule(std::size_t n, CycleMode mode) {
  if (n < 3) throw std::invalid_argument("cycle schedule needs n >= 3");
  std::vector<ActivationSet> script;
  if (mode == CycleMode::Grouped) {
    ActivationSet group;
    for (std::size_t i = 2; i < n; ++i) group.push_back(RobotId{i});
    script.push_back(group);
  } else {
    for (std::size_t i = 2; i < n; ++i) script.push_back({RobotId{i}});
  }
  script.push_back({RobotId{0}});
  script.push_back({RobotId{1}});
  return script;
}

std::unique_ptr<ActivationPolicy> make_derandomizer(std::unique_ptr<ActivationPolicy> target,
                                                    bool randomized_algorithm,
                                                    std::size_t starvation_cap) {
  return std::make_unique<Derandomizer>(std::move(target), randomized_algorithm, starvation_cap);
}

std::unique_ptr<ActivationPolicy> make_swap_adversary(std::vector<RobotId> order, double eps) {
  return std::make_unique<SwapAdversary>(std::move(order), eps);
}

std::unique_ptr<ActivationPolicy> make_byzantine_adversary(std::optional<RobotId> switch_robot,
                                                           double eps) {
  return std::make_unique<ByzantineAdversary>(switch_robot, eps);
}

}  // namespace gather
