#include "gather/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace gather {

std::string_view to_string(RobotStatus status) {
  switch (status) {
    case RobotStatus::Correct: return "correct";
    case RobotStatus::Crashed: return "crashed";
    case RobotStatus::Byzantine: return "byzantine";
  }
  return "unknown";
}

std::string_view to_string(GatherState state) {
  switch (state) {
    case GatherState::No: return "no";
    case GatherState::Weak: return "weak";
    case GatherState::Strong: return "strong";
  }
  return "unknown";
}

std::string_view to_string(RecurrenceMode mode) {
  switch (mode) {
    case RecurrenceMode::Anonymous: return "anonymous";
    case RecurrenceMode::Labeled: return "labeled";
    case RecurrenceMode::Equivalent: return "equivalent";
  }
  return "unknown";
}

RecurrenceMode parse_recurrence_mode(std::string_view text) {
  if (text == "anonymous") return RecurrenceMode::Anonymous;
  if (text == "labeled") return RecurrenceMode::Labeled;
  if (text == "equivalent") return RecurrenceMode::Equivalent;
  throw std::invalid_argument("unknown recurrence mode '" + std::string(text) + "'");
}

std::vector<Point> Configuration::positions() const {
  std::vector<Point> out;
  out.reserve(robots.size());
  for (const auto& r : robots) out.push_back(r.position);
  return out;
}

std::vector<Location> group_points(std::span<const Point> positions, double eps) {
  std::vector<Location> locations;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    auto it = std::find_if(locations.begin(), locations.end(), [&](const Location& l) {
      return (l.point - positions[i]).norm() <= eps;
    });
    if (it == locations.end()) {
      locations.push_back({positions[i], {RobotId{i}}});
    } else {
      it->members.push_back(RobotId{i});
    }
  }
  return locations;
}

std::vector<Location> group_locations(const Configuration& config, double eps) {
  const auto pts = config.positions();
  return group_points(pts, eps);
}

Point ObservationFrame::to_local(const Point& global) const {
  Point v = geometry::rotated<double>(global - translation, rotation);
  v.y() *= chirality;
  return v * scale;
}

Point ObservationFrame::to_global(const Point& local) const {
  Point v = local / scale;
  v.y() *= chirality;
  return geometry::rotated<double>(v, -rotation) + translation;
}

ObservationFrame ObservationFrame::identity_at(const Point& origin) {
  return {origin, 0.0, 1.0, 1};
}

ObservationFrame ObservationFrame::random_at(const Point& origin, RandomSource& rng) {
  ObservationFrame f;
  f.translation = origin;
  f.rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);
  f.scale = std::pow(10.0, rng.uniform(-1.0, 1.0));
  f.chirality = rng.bernoulli(0.5) ? 1 : -1;
  return f;
}

std::size_t Observation::own_multiplicity() const {
  for (const auto& p : points)
    if (p.point.isZero(0.0)) return p.multiplicity;
  throw std::logic_error("observation does not contain its own origin");
}

std::size_t Observation::mulmax() const {
  std::size_t m = 0;
  for (const auto& p : points) m = std::max(m, p.multiplicity);
  return m;
}

std::vector<Point> Observation::robot_positions() const {
  std::vector<Point> out;
  for (const auto& p : points)
    for (std::size_t k = 0; k < p.multiplicity; ++k) out.push_back(p.point);
  return out;
}

Observation observe(const Configuration& config, RobotId robot, const ObservationFrame& frame,
                    MultiplicityMode mode, double eps) {
  const auto locations = group_locations(config, eps);
  Observation obs;
  obs.mode = mode;
  obs.points.reserve(locations.size());
  for (const auto& loc : locations) {
    const bool own = std::find(loc.members.begin(), loc.members.end(), robot) != loc.members.end();
    ObservedPoint p;
    p.point = own ? Point::Zero() : frame.to_local(loc.point);
    p.multiplicity = mode == MultiplicityMode::WithMultiplicity ? loc.multiplicity() : 1;
    obs.points.push_back(p);
  }
  return obs;
}

Configuration apply_moves(const Configuration& config, std::span<const Move> moves) {
  Configuration next = config;
  next.step = config.step + 1;
  for (const auto& m : moves) {
    const RobotState& r = config[m.robot];
    if (r.crashed()) throw std::logic_error("move requested for a crashed robot");
    if (!geometry::is_finite(m.target)) throw std::invalid_argument("non-finite move target");
    const Point d = m.target - r.position;
    const double dist = d.norm();
    next[m.robot].position = dist <= r.delta_r ? m.target : Point(r.position + d * (r.delta_r / dist));
  }
  return next;
}

Metrics metrics(const Configuration& config, double eps) {
  Metrics m;
  const auto locations = group_locations(config, eps);
  m.valence = locations.size();
  std::vector<Point> pts;
  for (const auto& l : locations) {
    m.mulmax = std::max(m.mulmax, l.multiplicity());
    pts.push_back(l.point);
  }
  for (const auto& l : locations) {
    if (l.multiplicity() >= 2) m.towers.push_back(l.point);
    if (m.mulmax >= 2 && l.multiplicity() == m.mulmax) m.castles.push_back(l.point);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, (pts[i] - pts[j]).norm());
  m.nearest_neighbor_distance = pts.size() > 1 ? best : 0.0;
  if (!pts.empty()) {
    m.sec_diameter = 2.0 * geometry::smallest_enclosing_circle<double>(pts).radius;
    m.hull_vertices = geometry::convex_hull<double>(pts);
  }
  return m;
}

double robot_nearest_neighbor_distance(const Configuration& config, double eps) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j) {
      const double d = (config.robots[i].position - config.robots[j].position).norm();
      best = std::min(best, d <= eps ? 0.0 : d);
    }
  return config.size() > 1 ? best : 0.0;
}

GatherState is_gathered(const Configuration& config, double eps) {
  const auto locations = group_locations(config, eps);
  if (locations.size() == 1) return GatherState::Strong;

  std::size_t mulmax = 0;
  for (const auto& l : locations) mulmax = std::max(mulmax, l.multiplicity());
  const Location* castle = nullptr;
  for (const auto& l : locations) {
    if (l.multiplicity() != mulmax) continue;
    if (castle) return GatherState::No;
    castle = &l;
  }
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!config.robots[i].correct()) continue;
    if (std::find(castle->members.begin(), castle->members.end(), RobotId{i}) ==
        castle->members.end())
      return GatherState::No;
  }
  return GatherState::Weak;
}

namespace {

bool anonymous_match(const Configuration& a, const Configuration& b, double eps) {
  std::vector<bool> used(b.size(), false);
  for (const auto& ra : a.robots) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && (ra.position - b.robots[j].position).norm() <= eps) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool labeled_match(const Configuration& a, const Configuration& b, double eps) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a.robots[i].position - b.robots[i].position).norm() > eps) return false;
  return true;
}

std::complex<double> as_complex(const Point& p) { return {p.x(), p.y()}; }

bool similar_match(const Configuration& a, const Configuration& b, double eps) {
  const std::size_t n = a.size();
  std::size_t i = 0, j = 0;
  double span = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = (a.robots[k].position - a.robots[0].position).norm();
    if (d > span) span = d, j = k;
  }
  if (span <= eps) {
    for (std::size_t k = 1; k < n; ++k)
      if ((b.robots[k].position - b.robots[0].position).norm() > eps) return false;
    return true;
  }
  double scale_b = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    scale_b = std::max(scale_b, (b.robots[k].position - b.robots[0].position).norm());
  const double tol = std::max(eps, 1e-9 * scale_b);

  for (bool reflect : {false, true}) {
    auto za = [&](std::size_t k) {
      const auto z = as_complex(a.robots[k].position);
      return reflect ? std::conj(z) : z;
    };
    const std::complex<double> s =
        (as_complex(b.robots[j].position) - as_complex(b.robots[i].position)) / (za(j) - za(i));
    const std::complex<double> t = as_complex(b.robots[i].position) - s * za(i);
    if (std::abs(s) == 0.0) continue;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k)
      ok = std::abs(s * za(k) + t - as_complex(b.robots[k].position)) <= tol;
    if (ok) return true;
  }
  return false;
}

std::uint64_t hash_combine(std::uint64_t h, std::int64_t v) {
  return mix64(h ^ static_cast<std::uint64_t>(v));
}

}  // namespace

bool configurations_match(const Configuration& a, const Configuration& b, double eps,
                          RecurrenceMode mode) {
  if (a.size() != b.size()) return false;
  switch (mode) {
    case RecurrenceMode::Anonymous: return anonymous_match(a, b, eps);
    case RecurrenceMode::Labeled: return labeled_match(a, b, eps);
    case RecurrenceMode::Equivalent: return similar_match(a, b, eps);
  }
  return false;
}

std::uint64_t RecurrenceDetector::key(const Configuration& config) const {
  const double grid = std::max(eps_ * 1e3, 1e-9);
  std::uint64_t h = config.size();
  switch (mode_) {
    case RecurrenceMode::Anonymous: {
      std::vector<std::pair<std::int64_t, std::int64_t>> cells;
      for (const auto& r : config.robots)
        cells.emplace_back(std::llround(r.position.x() / grid), std::llround(r.position.y() / grid));
      std::sort(cells.begin(), cells.end());
      for (const auto& [x, y] : cells) h = hash_combine(hash_combine(h, x), y);
      break;
    }
    case RecurrenceMode::Labeled:
      for (const auto& r : config.robots) {
        h = hash_combine(h, std::llround(r.position.x() / grid));
        h = hash_combine(h, std::llround(r.position.y() / grid));
      }
      break;
    case RecurrenceMode::Equivalent: {
      Point c = Point::Zero();
      for (const auto& r : config.robots) c += r.position;
      c /= static_cast<double>(config.size());
      double radius = 0.0;
      for (const auto& r : config.robots) radius = std::max(radius, (r.position - c).norm());
      if (radius <= eps_) break;
      for (const auto& r : config.robots)
        h = hash_combine(h, std::llround((r.position - c).norm() / radius * 1e4));
      break;
    }
  }
  return h;
}

std::optional<Recurrence> RecurrenceDetector::push(const Configuration& config, std::uint64_t tag) {
  const std::uint64_t k = hash_combine(key(config), static_cast<std::int64_t>(tag));
  const std::size_t index = seen_.size();
  std::optional<Recurrence> found;
  auto [lo, hi] = index_.equal_range(k);
  for (auto it = lo; it != hi; ++it) {
    if (tags_[it->second] == tag && configurations_match(seen_[it->second], config, eps_, mode_)) {
      if (!found || it->second < found->first) found = Recurrence{it->second, index - it->second};
    }
  }
  seen_.push_back(config);
  tags_.push_back(tag);
  if (!found) index_.emplace(k, index);
  return found;
}

std::optional<Recurrence> detect_recurrence(std::span<const Configuration> trace, double eps,
                                            RecurrenceMode mode) {
  RecurrenceDetector detector(eps, mode);
  for (const auto& c : trace)
    if (auto r = detector.push(c)) return r;
  return std::nullopt;
}

}  // namespace gather
