#pragma once

// Brute-force reference implementations used to check the library.

#include "gather/analytic.hpp"
#include "gather/model.hpp"
#include "gather/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using gather::Point;

struct Disc {
  Point center = Point::Zero();
  double radius = 0.0;
};

inline bool covers(const Disc& d, const std::vector<Point>& pts, double tol) {
  for (const auto& p : pts)
    if ((p - d.center).norm() > d.radius + tol) return false;
  return true;
}

/// Smallest circle among all pair-diameter and triple-circumscribed circles that covers every point.
inline Disc brute_force_sec(const std::vector<Point>& pts) {
  if (pts.size() == 1) return {pts[0], 0.0};
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;
  Disc best{Point::Zero(), std::numeric_limits<double>::infinity()};
  auto consider = [&](const Disc& d) {
    if (d.radius < best.radius && covers(d, pts, tol)) best = d;
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      consider({(pts[i] + pts[j]) / 2.0, (pts[i] - pts[j]).norm() / 2.0});
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        // Circumcenter from the perpendicular-bisector equations.
        Eigen::Matrix2d A;
        A.row(0) = 2.0 * (pts[j] - pts[i]).transpose();
        A.row(1) = 2.0 * (pts[k] - pts[i]).transpose();
        const Eigen::Vector2d b(pts[j].squaredNorm() - pts[i].squaredNorm(),
                                pts[k].squaredNorm() - pts[i].squaredNorm());
        if (std::abs(A.determinant()) < 1e-12 * scale * scale) continue;
        const Point c = A.fullPivLu().solve(b);
        consider({c, (c - pts[i]).norm()});
      }
    }
  return best;
}

/// Indices of the sites at minimal distance from the probe (within tol).
inline std::vector<std::size_t> nearest_sites(const std::vector<Point>& sites, const Point& probe,
                                              double tol) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sites) best = std::min(best, (s - probe).norm());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sites.size(); ++i)
    if ((sites[i] - probe).norm() <= best + tol) out.push_back(i);
  return out;
}

/// Enumerates all 2^(i+o) coin outcomes, each robot moving with probability 1/M,
/// and sums those where the number of arrivals equals the number of departures.
inline double enumerate_balance(std::size_t i, std::size_t o, double M) {
  const double q = 1.0 / M;
  double total = 0.0;
  const std::uint64_t outcomes = std::uint64_t{1} << (i + o);
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    double prob = 1.0;
    std::size_t in = 0, out = 0;
    for (std::size_t b = 0; b < i + o; ++b) {
      const bool moves = (mask >> b) & 1U;
      prob *= moves ? q : 1.0 - q;
      if (moves) (b < i ? in : out)++;
    }
    if (in == out) total += prob;
  }
  return total;
}

/// Sum, over every designated x-subset S of the incoming robots, of the probability
/// that all of S move while the remaining incoming and outgoing robots balance.
/// Enumerates every coin outcome for every subset.
inline double enumerate_increase(std::size_t i, std::size_t o, std::size_t x, double M) {
  const double q = 1.0 / M;
  double total = 0.0;
  const std::uint64_t outcomes = std::uint64_t{1} << (i + o);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << i); ++subset) {
    if (static_cast<std::size_t>(__builtin_popcountll(subset)) != x) continue;
    for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
      double prob = 1.0;
      std::size_t in = 0, out = 0;
      bool ok = true;
      for (std::size_t b = 0; b < i + o; ++b) {
        const bool moves = (mask >> b) & 1U;
        prob *= moves ? q : 1.0 - q;
        if (b < i && ((subset >> b) & 1U)) {
          ok = ok && moves;
        } else if (moves) {
          (b < i ? in : out)++;
        }
      }
      if (ok && in == out) total += prob;
    }
  }
  return total;
}

/// Probability that exactly x more robots arrive than leave, by enumeration.
inline double enumerate_net_gain(std::size_t i, std::size_t o, std::size_t x, double M) {
  const double q = 1.0 / M;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (i + o)); ++mask) {
    double prob = 1.0;
    long long net = 0;
    for (std::size_t b = 0; b < i + o; ++b) {
      const bool moves = (mask >> b) & 1U;
      prob *= moves ? q : 1.0 - q;
      if (moves) net += b < i ? 1 : -1;
    }
    if (net == static_cast<long long>(x)) total += prob;
  }
  return total;
}

/// Mean number of transitions to reach the last state, by simulating `walks`
/// random walks of a row-stochastic matrix from `start`.
inline double random_walk_hitting_time(const Eigen::MatrixXd& P, Eigen::Index start,
                                       std::size_t walks, std::uint64_t seed) {
  const Eigen::Index S = P.rows();
  const Eigen::Index target = S - 1;
  std::vector<std::vector<double>> cumulative(static_cast<std::size_t>(S));
  for (Eigen::Index r = 0; r < S; ++r) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < S; ++c) cumulative[r].push_back(acc += P(r, c));
  }
  gather::RandomSource rng(seed);
  double total = 0.0;
  for (std::size_t w = 0; w < walks; ++w) {
    Eigen::Index s = start;
    std::size_t steps = 0;
    while (s != target) {
      const double u = rng.uniform() * cumulative[s].back();
      const auto& row = cumulative[s];
      s = static_cast<Eigen::Index>(std::upper_bound(row.begin(), row.end(), u) - row.begin());
      if (s >= S) s = S - 1;
      ++steps;
    }
    total += static_cast<double>(steps);
  }
  return total / static_cast<double>(walks);
}

/// Markov chain assembled directly from the transition rules, independent of the solver.
inline Eigen::MatrixXd castle_chain(std::size_t n, double p) {
  const std::size_t half = n / 2;
  // States: D, 0, 2..half, 1, G.
  const std::size_t S = half + 3;
  auto index = [&](std::size_t castles) -> Eigen::Index {
    if (castles == 0) return 1;
    if (castles == 1) return static_cast<Eigen::Index>(S - 2);
    return static_cast<Eigen::Index>(castles);
  };
  auto choose = [](std::size_t a, std::size_t b) {
    double c = 1.0;
    for (std::size_t j = 1; j <= b; ++j) c = c * static_cast<double>(a - b + j) / static_cast<double>(j);
    return c;
  };
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
  for (std::size_t x = 0; x <= half; ++x)
    P(0, x == 0 ? 0 : index(x)) += choose(half, x) / std::pow(2.0, static_cast<double>(half));
  P(1, index(half)) = 1.0;
  for (std::size_t k = 2; k <= half; ++k)
    for (std::size_t x = 0; x <= k; ++x)
      P(index(k), index(x)) += choose(k, x) * std::pow(p, static_cast<double>(x)) *
                               std::pow(1.0 - p, static_cast<double>(k - x));
  P(static_cast<Eigen::Index>(S - 2), static_cast<Eigen::Index>(S - 1)) = 1.0;
  P(static_cast<Eigen::Index>(S - 1), static_cast<Eigen::Index>(S - 1)) = 1.0;
  return P;
}

/// Uniform random points in [lo, hi]^2.
inline std::vector<Point> random_points(gather::RandomSource& rng, std::size_t count, double lo,
                                        double hi) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < count; ++i) pts.emplace_back(rng.uniform(lo, hi), rng.uniform(lo, hi));
  return pts;
}

}  // namespace oracle
