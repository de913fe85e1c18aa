#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace gather::geometry {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
struct Circle {
  Point2<Scalar> center = Point2<Scalar>::Zero();
  Scalar radius = Scalar(0);

  bool contains(const Point2<Scalar>& p, Scalar tol) const {
    return (p - center).norm() <= radius + tol;
  }
};

/// The closed half-plane {p : normal . p <= offset}.
template <typename Scalar>
struct HalfPlane {
  Point2<Scalar> normal = Point2<Scalar>::UnitX();
  Scalar offset = Scalar(0);

  Scalar signed_distance(const Point2<Scalar>& p) const { return normal.dot(p) - offset; }
  bool contains(const Point2<Scalar>& p, Scalar tol) const { return signed_distance(p) <= tol; }
};

/// Intersection of half-planes. An empty list is the whole plane.
template <typename Scalar>
struct Region {
  std::vector<HalfPlane<Scalar>> halfplanes;

  bool contains(const Point2<Scalar>& p, Scalar tol) const {
    return std::all_of(halfplanes.begin(), halfplanes.end(),
                       [&](const HalfPlane<Scalar>& h) { return h.contains(p, tol); });
  }
};

template <typename Scalar>
Scalar cross(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
bool is_finite(const Point2<Scalar>& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y());
}

template <typename Scalar>
Scalar point_segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a,
                              const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (p - a).norm();
  const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

/// Rotate v by angle (counter-clockwise for positive angles).
template <typename Scalar>
Point2<Scalar> rotated(const Point2<Scalar>& v, Scalar angle) {
  const Scalar c = std::cos(angle), s = std::sin(angle);
  return Point2<Scalar>(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

namespace detail {

template <typename Scalar>
Scalar scale_of(std::span<const Point2<Scalar>> points) {
  Scalar s(1);
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

template <typename Scalar>
Circle<Scalar> circle_from_two(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return {(a + b) / Scalar(2), (a - b).norm() / Scalar(2)};
}

// Circumcircle of three points; nullopt when they are (numerically) collinear.
template <typename Scalar>
std::optional<Circle<Scalar>> circumcircle(const Point2<Scalar>& a, const Point2<Scalar>& b,
                                           const Point2<Scalar>& c) {
  const Point2<Scalar> ab = b - a, ac = c - a;
  const Scalar d = Scalar(2) * cross(ab, ac);
  const Scalar scale = std::max({ab.squaredNorm(), ac.squaredNorm(), Scalar(1e-300)});
  if (std::abs(d) <= Scalar(1e-14) * scale) return std::nullopt;
  const Scalar ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
  const Point2<Scalar> rel((ac.y() * ab2 - ab.y() * ac2) / d, (ab.x() * ac2 - ac.x() * ab2) / d);
  return Circle<Scalar>{a + rel, rel.norm()};
}

template <typename Scalar>
Circle<Scalar> circle_from_three(const Point2<Scalar>& a, const Point2<Scalar>& b,
                                 const Point2<Scalar>& c) {
  if (auto cc = circumcircle(a, b, c)) return *cc;
  // Collinear: the farthest pair spans the circle.
  Circle<Scalar> best = circle_from_two(a, b);
  for (const auto& cand : {circle_from_two(a, c), circle_from_two(b, c)})
    if (cand.radius > best.radius) best = cand;
  return best;
}

}  // namespace detail

/// Smallest enclosing circle by randomized incremental construction.
/// The shuffle is seeded so results are reproducible.
template <typename Scalar>
Circle<Scalar> smallest_enclosing_circle(std::span<const Point2<Scalar>> points,
                                         std::uint64_t shuffle_seed = 0x5eed) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  for (const auto& p : points)
    if (!is_finite(p)) throw std::invalid_argument("non-finite point");

  std::vector<Point2<Scalar>> pts(points.begin(), points.end());
  std::mt19937_64 gen(shuffle_seed);
  std::shuffle(pts.begin(), pts.end(), gen);
  const Scalar tol = Scalar(1e-12) * detail::scale_of<Scalar>(pts);

  Circle<Scalar> c{pts[0], Scalar(0)};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (c.contains(pts[i], tol)) continue;
    c = {pts[i], Scalar(0)};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(pts[j], tol)) continue;
      c = detail::circle_from_two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (c.contains(pts[k], tol)) continue;
        c = detail::circle_from_three(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

template <typename Scalar>
Circle<Scalar> smallest_enclosing_circle(const std::vector<Point2<Scalar>>& points,
                                         std::uint64_t shuffle_seed = 0x5eed) {
  return smallest_enclosing_circle(std::span<const Point2<Scalar>>(points), shuffle_seed);
}

/// Convex hull in counter-clockwise order without collinear vertices (monotone chain).
/// Coincident inputs give one vertex; collinear inputs give the two extremes.
template <typename Scalar>
std::vector<Point2<Scalar>> convex_hull(std::span<const Point2<Scalar>> points) {
  if (points.empty()) throw std::invalid_argument("empty point set");
  std::vector<Point2<Scalar>> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return a == b; }),
            pts.end());
  if (pts.size() < 3) return pts;

  const Scalar tol = Scalar(1e-12) * detail::scale_of<Scalar>(pts) *
                     detail::scale_of<Scalar>(pts);
  std::vector<Point2<Scalar>> hull(2 * pts.size());
  std::size_t k = 0;
  auto turn = [&](const Point2<Scalar>& o, const Point2<Scalar>& a, const Point2<Scalar>& b) {
    return cross<Scalar>(a - o, b - o);
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() == 1) hull.push_back(pts.back());
  return hull;
}

template <typename Scalar>
std::vector<Point2<Scalar>> convex_hull(const std::vector<Point2<Scalar>>& points) {
  return convex_hull(std::span<const Point2<Scalar>>(points));
}

/// True when p lies inside or on the convex polygon given in counter-clockwise order.
template <typename Scalar>
bool hull_contains(const std::vector<Point2<Scalar>>& hull, const Point2<Scalar>& p, Scalar tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return (p - hull[0]).norm() <= tol;
  if (hull.size() == 2) return point_segment_distance(p, hull[0], hull[1]) <= tol;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2<Scalar>& a = hull[i];
    const Point2<Scalar>& b = hull[(i + 1) % hull.size()];
    const Point2<Scalar> edge = b - a;
    if (cross<Scalar>(edge, p - a) < -tol * edge.norm()) return false;
  }
  return true;
}

/// Voronoi cell of `site` among `sites` as perpendicular-bisector half-planes.
template <typename Scalar>
Region<Scalar> voronoi_cell(const Point2<Scalar>& site, std::span<const Point2<Scalar>> sites,
                            Scalar eps_snap = Scalar(1e-9)) {
  const bool present = std::any_of(sites.begin(), sites.end(), [&](const Point2<Scalar>& s) {
    return (s - site).norm() <= eps_snap;
  });
  if (!present) throw std::invalid_argument("site is not among the sites");

  Region<Scalar> region;
  for (const auto& s : sites) {
    const Point2<Scalar> d = s - site;
    const Scalar len = d.norm();
    if (len <= eps_snap) continue;
    const Point2<Scalar> normal = d / len;
    region.halfplanes.push_back({normal, normal.dot((s + site) / Scalar(2))});
  }
  return region;
}

template <typename Scalar>
Region<Scalar> voronoi_cell(const Point2<Scalar>& site, const std::vector<Point2<Scalar>>& sites,
                            Scalar eps_snap = Scalar(1e-9)) {
  return voronoi_cell(site, std::span<const Point2<Scalar>>(sites), eps_snap);
}

/// Counts positions within eps of segment pq, skipping those coincident with p
/// and keeping those coincident with q.
template <typename Scalar>
std::size_t robots_on_segment(const Point2<Scalar>& p, const Point2<Scalar>& q,
                              std::span<const Point2<Scalar>> positions, Scalar eps) {
  if ((p - q).norm() <= eps) throw std::invalid_argument("degenerate segment");
  std::size_t count = 0;
  for (const auto& r : positions) {
    if ((r - p).norm() <= eps) continue;
    if (point_segment_distance(r, p, q) <= eps) ++count;
  }
  return count;
}

template <typename Scalar>
std::size_t robots_on_segment(const Point2<Scalar>& p, const Point2<Scalar>& q,
                              const std::vector<Point2<Scalar>>& positions, Scalar eps) {
  return robots_on_segment(p, q, std::span<const Point2<Scalar>>(positions), eps);
}

/// Distance along the ray origin + t * direction at which it leaves `region`;
/// nullopt when the ray stays inside forever.
template <typename Scalar>
std::optional<Scalar> ray_region_exit_distance(const Point2<Scalar>& origin,
                                               const Point2<Scalar>& direction,
                                               const Region<Scalar>& region,
                                               Scalar tol = Scalar(1e-9)) {
  if (!region.contains(origin, tol)) throw std::invalid_argument("ray origin outside region");
  std::optional<Scalar> best;
  for (const auto& h : region.halfplanes) {
    const Scalar rate = h.normal.dot(direction);
    if (rate <= Scalar(0)) continue;
    const Scalar t = std::max(Scalar(0), (h.offset - h.normal.dot(origin)) / rate);
    if (!best || t < *best) best = t;
  }
  return best;
}

/// First boundary crossing of the ray, or nullopt if it never exits.
template <typename Scalar>
std::optional<Point2<Scalar>> ray_region_exit(const Point2<Scalar>& origin,
                                              const Point2<Scalar>& direction,
                                              const Region<Scalar>& region,
                                              Scalar tol = Scalar(1e-9)) {
  const auto t = ray_region_exit_distance(origin, direction, region, tol);
  if (!t) return std::nullopt;
  return Point2<Scalar>(origin + *t * direction);
}

/// Proper intersection test for closed segments ab and cd.
template <typename Scalar>
bool segments_intersect(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c,
                        const Point2<Scalar>& d, Scalar tol = Scalar(0)) {
  const Scalar d1 = cross<Scalar>(b - a, c - a), d2 = cross<Scalar>(b - a, d - a);
  const Scalar d3 = cross<Scalar>(d - c, a - c), d4 = cross<Scalar>(d - c, b - c);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
    return true;
  auto on = [&](const Point2<Scalar>& p, const Point2<Scalar>& s0, const Point2<Scalar>& s1) {
    return point_segment_distance(p, s0, s1) <= tol;
  };
  return on(c, a, b) || on(d, a, b) || on(a, c, d) || on(b, c, d);
}

}  // namespace gather::geometry
