#include "gather/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace gather {

namespace {

constexpr double kTol = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using CanonicalKey = std::vector<std::tuple<std::int64_t, std::int64_t, std::size_t>>;

std::tuple<std::int64_t, std::int64_t> grid_cell(const Point& p) {
  return {std::llround(p.x() * 1e7), std::llround(p.y() * 1e7)};
}

CanonicalKey key_of(const std::vector<ObservedPoint>& pts) {
  CanonicalKey key;
  key.reserve(pts.size());
  for (const auto& p : pts) {
    auto [x, y] = grid_cell(p.point);
    key.emplace_back(x, y, p.multiplicity);
  }
  std::sort(key.begin(), key.end());
  return key;
}

double polar_angle(const Point& p) {
  double a = std::atan2(p.y(), p.x());
  if (a < 0) a += kTwoPi;
  return a;
}

bool is_origin(const Point& p) { return p.norm() <= kTol; }

// Nearest candidate, ties broken by smallest polar angle and then distance.
std::size_t nearest_index(const std::vector<ObservedPoint>& pts,
                          const std::vector<std::size_t>& candidates) {
  std::size_t best = candidates.front();
  for (std::size_t c : candidates) {
    if (c == best) continue;
    const double dc = pts[c].point.norm(), db = pts[best].point.norm();
    if (dc < db - kTol) {
      best = c;
    } else if (std::abs(dc - db) <= kTol) {
      const double ac = polar_angle(pts[c].point), ab = polar_angle(pts[best].point);
      if (ac < ab - kTol || (std::abs(ac - ab) <= kTol && dc < db)) best = c;
    }
  }
  return best;
}

Decision in_canonical_frame(const Observation& obs,
                            const std::function<Decision(const Observation&)>& rule) {
  const CanonicalObservation c = canonicalize(obs);
  Decision d = rule(c.observation);
  if (d.moves()) d.target = c.transform.invert(d.target);
  return d;
}

Decision det_ft_canonical(const Observation& o, const AlgorithmOptions& options, bool naive) {
  const std::size_t mulmax = o.mulmax();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < o.points.size(); ++i)
    if (o.points[i].multiplicity == mulmax && !is_origin(o.points[i].point)) others.push_back(i);
  if (others.empty()) return Decision::stay();

  const std::size_t qi = nearest_index(o.points, others);
  const Point q = o.points[qi].point;
  if (naive) return Decision::move_to(q);

  std::size_t between = 0;
  for (std::size_t i = 0; i < o.points.size(); ++i) {
    if (i == qi || is_origin(o.points[i].point)) continue;
    if (geometry::point_segment_distance<double>(o.points[i].point, Point::Zero(), q) <= kTol)
      between += o.points[i].multiplicity;
  }
  bool blocked = false;
  switch (options.blocked_rule) {
    case BlockedRule::Proof:
      blocked = between >= std::max<std::size_t>(1, mulmax - 1);
      break;
    case BlockedRule::Listing:
      blocked = between + o.points[qi].multiplicity >= 2 * mulmax;
      break;
  }
  if (!blocked) return Decision::move_to(q);
  return Decision::move_to(side_move_target(Point::Zero(), q, o, kTol));
}

Decision prob_ft_canonical(const Observation& o, RandomSource& rng,
                           const AlgorithmOptions& options) {
  const std::size_t mulmax = o.mulmax();
  if (o.own_multiplicity() < mulmax) return det_ft_canonical(o, options, false);
  const auto castles = std::count_if(o.points.begin(), o.points.end(),
                                     [&](const ObservedPoint& p) { return p.multiplicity == mulmax; });
  if (castles == 1) return Decision::stay();
  const double alpha = std::min(1.0 / static_cast<double>(mulmax), 0.5);
  if (rng.bernoulli(alpha)) return det_ft_canonical(o, options, false);
  return Decision::stay();
}

Decision prob_basic_canonical(const Observation& o, RandomSource& rng) {
  const std::size_t v = o.points.size();
  const bool coin = rng.bernoulli(1.0 / static_cast<double>(v));
  if (v == 1 || !coin) return Decision::stay();
  std::vector<Point> others;
  for (const auto& p : o.points)
    if (!is_origin(p.point)) others.push_back(p.point);
  std::sort(others.begin(), others.end(),
            [](const Point& a, const Point& b) { return grid_cell(a) < grid_cell(b); });
  return Decision::move_to(others[rng.below(others.size())]);
}

Decision nearest_neighbor_canonical(const Observation& o) {
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < o.points.size(); ++i)
    if (!is_origin(o.points[i].point)) others.push_back(i);
  if (others.empty()) return Decision::stay();
  return Decision::move_to(o.points[nearest_index(o.points, others)].point);
}

}  // namespace

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::ProbBasic: return "prob-basic";
    case AlgorithmKind::DetFT: return "det-ft";
    case AlgorithmKind::DetFTNaive: return "det-ft-naive";
    case AlgorithmKind::ProbFT: return "prob-ft";
    case AlgorithmKind::TwoRobotDet: return "two-robot";
    case AlgorithmKind::Barycenter: return "barycenter";
    case AlgorithmKind::NearestNeighbor: return "nearest-neighbor";
  }
  return "unknown";
}

AlgorithmKind parse_algorithm(std::string_view name) {
  for (auto k : {AlgorithmKind::ProbBasic, AlgorithmKind::DetFT, AlgorithmKind::DetFTNaive,
                 AlgorithmKind::ProbFT, AlgorithmKind::TwoRobotDet, AlgorithmKind::Barycenter,
                 AlgorithmKind::NearestNeighbor})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

MultiplicityMode required_mode(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::DetFT:
    case AlgorithmKind::DetFTNaive:
    case AlgorithmKind::ProbFT:
    case AlgorithmKind::Barycenter:
      return MultiplicityMode::WithMultiplicity;
    default:
      return MultiplicityMode::WithoutMultiplicity;
  }
}

bool is_deterministic(AlgorithmKind kind) {
  return kind != AlgorithmKind::ProbBasic && kind != AlgorithmKind::ProbFT;
}

std::string_view to_string(BlockedRule rule) {
  return rule == BlockedRule::Proof ? "proof" : "listing";
}

BlockedRule parse_blocked_rule(std::string_view text) {
  if (text == "proof") return BlockedRule::Proof;
  if (text == "listing") return BlockedRule::Listing;
  throw std::invalid_argument("unknown blocked rule '" + std::string(text) + "'");
}

Point Similarity::apply(const Point& p) const {
  Point v(p.x(), chirality * p.y());
  return geometry::rotated<double>(v, rotation) * scale;
}

Point Similarity::invert(const Point& p) const {
  Point v = geometry::rotated<double>(Point(p / scale), -rotation);
  v.y() *= chirality;
  return v;
}

CanonicalObservation canonicalize(const Observation& obs) {
  double radius = 0.0;
  for (const auto& p : obs.points) radius = std::max(radius, p.point.norm());
  if (radius == 0.0) return {Similarity{}, obs};

  std::optional<CanonicalKey> best_key;
  CanonicalObservation best;
  for (const auto& ref : obs.points) {
    if (ref.point.norm() < radius * (1.0 - 1e-9)) continue;
    for (int chirality : {1, -1}) {
      Similarity s;
      s.chirality = chirality;
      s.scale = 1.0 / radius;
      s.rotation = -std::atan2(chirality * ref.point.y(), ref.point.x());
      Observation mapped = obs;
      for (auto& p : mapped.points) p.point = s.apply(p.point);
      CanonicalKey key = key_of(mapped.points);
      if (!best_key || key < *best_key) {
        best_key = std::move(key);
        best = {s, std::move(mapped)};
      }
    }
  }
  // The observer stays exactly at the origin.
  for (auto& p : best.observation.points)
    if (p.point.norm() == 0.0) p.point = Point::Zero();
  return best;
}

Decision alg_prob_basic(const Observation& obs, RandomSource& rng) {
  if (obs.points.empty()) throw std::invalid_argument("empty observation");
  return in_canonical_frame(obs, [&](const Observation& o) { return prob_basic_canonical(o, rng); });
}

Decision alg_two_robot_det(const Observation& obs) {
  if (obs.points.size() > 2) throw std::invalid_argument("two-robot rule misapplied");
  for (const auto& p : obs.points)
    if (!is_origin(p.point)) return Decision::move_to(p.point);
  return Decision::stay();
}

Decision alg_det_ft(const Observation& obs, const AlgorithmOptions& options) {
  return in_canonical_frame(obs,
                            [&](const Observation& o) { return det_ft_canonical(o, options, false); });
}

Decision alg_det_ft_naive(const Observation& obs) {
  return in_canonical_frame(obs, [](const Observation& o) { return det_ft_canonical(o, {}, true); });
}

Decision alg_prob_ft(const Observation& obs, RandomSource& rng, const AlgorithmOptions& options) {
  return in_canonical_frame(obs,
                            [&](const Observation& o) { return prob_ft_canonical(o, rng, options); });
}

Decision alg_barycenter(const Observation& obs) {
  if (obs.points.empty()) throw std::invalid_argument("empty observation");
  Point sum = Point::Zero();
  double weight = 0.0;
  for (const auto& p : obs.points) {
    const double w = obs.mode == MultiplicityMode::WithMultiplicity
                         ? static_cast<double>(p.multiplicity)
                         : 1.0;
    sum += w * p.point;
    weight += w;
  }
  return Decision::move_to(sum / weight);
}

Decision alg_nearest_neighbor(const Observation& obs) {
  return in_canonical_frame(obs, nearest_neighbor_canonical);
}

Decision decide(AlgorithmKind kind, const Observation& obs, RandomSource& rng,
                const AlgorithmOptions& options) {
  switch (kind) {
    case AlgorithmKind::ProbBasic: return alg_prob_basic(obs, rng);
    case AlgorithmKind::DetFT: return alg_det_ft(obs, options);
    case AlgorithmKind::DetFTNaive: return alg_det_ft_naive(obs);
    case AlgorithmKind::ProbFT: return alg_prob_ft(obs, rng, options);
    case AlgorithmKind::TwoRobotDet: return alg_two_robot_det(obs);
    case AlgorithmKind::Barycenter: return alg_barycenter(obs);
    case AlgorithmKind::NearestNeighbor: return alg_nearest_neighbor(obs);
  }
  throw std::invalid_argument("unknown algorithm");
}

Point side_move_target(const Point& p, const Point& q, const Observation& obs, double eps) {
  const double qp_len = (p - q).norm();
  if (qp_len <= eps) throw std::invalid_argument("side move: p is colocated with q");

  const std::size_t mulmax = obs.mulmax();
  std::vector<Point> castles;
  for (const auto& o : obs.points)
    if (o.multiplicity == mulmax && (o.point - p).norm() > eps) castles.push_back(o.point);
  if (std::none_of(castles.begin(), castles.end(),
                   [&](const Point& c) { return (c - q).norm() <= eps; }))
    throw std::invalid_argument("side move: q is not a castle");

  const Region cell = geometry::voronoi_cell<double>(q, castles, eps);
  if (!cell.contains(p, eps * std::max(1.0, qp_len)))
    throw std::runtime_error("side move: p lies outside the Voronoi cell of q");

  const Point dir_p = (p - q) / qp_len;
  const double base = std::atan2(dir_p.y(), dir_p.x());
  double theta_cw = std::numbers::pi;
  double reach = 2.0 * qp_len;
  for (const auto& o : obs.points) {
    reach = std::max(reach, 2.0 * (o.point - q).norm());
    if ((o.point - p).norm() <= eps || (o.point - q).norm() <= eps) continue;
    if (!cell.contains(o.point, eps)) continue;
    const Point d = o.point - q;
    double cw = std::fmod(base - std::atan2(d.y(), d.x()), kTwoPi);
    if (cw < 0) cw += kTwoPi;
    if (cw <= 1e-12 || cw >= kTwoPi - 1e-12) continue;  // on the ray through p
    theta_cw = std::min(theta_cw, cw);
  }
  const double theta_plus = theta_cw / 3.0;
  const Point u = geometry::rotated<double>(dir_p, -theta_plus);

  const auto exit_p = geometry::ray_region_exit_distance<double>(q, dir_p, cell, eps);
  const double vp_len = exit_p ? std::max(*exit_p, qp_len) : reach;
  const auto exit_a = geometry::ray_region_exit_distance<double>(q, u, cell, eps);
  const double t_b = qp_len * std::cos(theta_plus);
  const double t_prime = exit_a ? std::min(*exit_a, t_b) : t_b;
  if (!(t_prime > 0.0))
    throw std::runtime_error("side move: empty target region (theta+ = " +
                             std::to_string(theta_plus) + ")");
  return q + (qp_len / vp_len) * t_prime * u;
}

double side_move_scaled_length(double alpha, double theta_plus, double m) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  const double first = alpha * alpha * std::cos(theta_plus);
  const double denom = std::cos(theta_plus) - std::sin(theta_plus) / m;
  if (denom <= 0.0) return first;
  return std::min(first, alpha / denom);
}

}  // namespace gather
