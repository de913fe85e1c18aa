#pragma once

#include "gather/geometry.hpp"
#include "gather/random.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gather {

using Point = geometry::Point2<double>;
using Circle = geometry::Circle<double>;
using HalfPlane = geometry::HalfPlane<double>;
using Region = geometry::Region<double>;

/// Default colocation threshold: two robots share a location iff their distance is at most this.
inline constexpr double kEpsSnap = 1e-9;

struct RobotId {
  std::size_t index = 0;
  auto operator<=>(const RobotId&) const = default;
};

enum class RobotStatus { Correct, Crashed, Byzantine };

std::string_view to_string(RobotStatus status);

struct RobotState {
  Point position = Point::Zero();
  RobotStatus status = RobotStatus::Correct;
  std::optional<std::size_t> crashed_at;
  double delta_r = 1.0;

  bool correct() const { return status == RobotStatus::Correct; }
  bool crashed() const { return status == RobotStatus::Crashed; }
  bool byzantine() const { return status == RobotStatus::Byzantine; }
};

struct Configuration {
  std::vector<RobotState> robots;
  std::size_t step = 0;

  std::size_t size() const { return robots.size(); }
  const RobotState& operator[](RobotId id) const { return robots.at(id.index); }
  RobotState& operator[](RobotId id) { return robots.at(id.index); }
  std::vector<Point> positions() const;
};

/// A point of the plane together with the robots standing on it.
struct Location {
  Point point = Point::Zero();
  std::vector<RobotId> members;

  std::size_t multiplicity() const { return members.size(); }
};

/// Groups positions by eps-colocation. A position joins the first earlier
/// location within eps of that location's representative point.
std::vector<Location> group_points(std::span<const Point> positions, double eps = kEpsSnap);
std::vector<Location> group_locations(const Configuration& config, double eps = kEpsSnap);

/// A robot's private coordinate system. Global to local is
/// translate, rotate, reflect, then scale.
struct ObservationFrame {
  Point translation = Point::Zero();
  double rotation = 0.0;
  double scale = 1.0;
  int chirality = 1;

  Point to_local(const Point& global) const;
  Point to_global(const Point& local) const;

  static ObservationFrame identity_at(const Point& origin);
  /// Uniform rotation, log-uniform scale in [0.1, 10], fair-coin chirality.
  static ObservationFrame random_at(const Point& origin, RandomSource& rng);
};

enum class MultiplicityMode { WithMultiplicity, WithoutMultiplicity };

struct ObservedPoint {
  Point point = Point::Zero();
  std::size_t multiplicity = 1;
};

/// What a robot sees: its own location is the exact local origin.
struct Observation {
  MultiplicityMode mode = MultiplicityMode::WithMultiplicity;
  std::vector<ObservedPoint> points;

  std::size_t valence() const { return points.size(); }
  /// Multiplicity at the observer's own location.
  std::size_t own_multiplicity() const;
  std::size_t mulmax() const;
  /// Every robot position, repeated by multiplicity.
  std::vector<Point> robot_positions() const;
};

Observation observe(const Configuration& config, RobotId robot, const ObservationFrame& frame,
                    MultiplicityMode mode, double eps = kEpsSnap);

struct Move {
  RobotId robot;
  Point target = Point::Zero();
};

/// Applies all moves simultaneously from the pre-step snapshot. A mover within
/// delta_r of its target lands exactly on it; otherwise it travels exactly delta_r.
Configuration apply_moves(const Configuration& config, std::span<const Move> moves);

struct Metrics {
  std::size_t valence = 0;
  std::size_t mulmax = 0;
  std::vector<Point> castles;
  std::vector<Point> towers;
  /// Smallest distance between two distinct locations; 0 when univalent.
  double nearest_neighbor_distance = 0.0;
  double sec_diameter = 0.0;
  std::vector<Point> hull_vertices;
};

Metrics metrics(const Configuration& config, double eps = kEpsSnap);

/// Smallest distance between a robot and its nearest neighbor, 0 when two robots share a location.
double robot_nearest_neighbor_distance(const Configuration& config, double eps = kEpsSnap);

enum class GatherState { No, Weak, Strong };

std::string_view to_string(GatherState state);

GatherState is_gathered(const Configuration& config, double eps = kEpsSnap);

/// How two configurations are compared when looking for a repetition.
enum class RecurrenceMode {
  Anonymous,   ///< equal multisets of positions
  Labeled,     ///< equal positions robot by robot
  Equivalent,  ///< robot by robot, up to a similarity transform of the plane
};

std::string_view to_string(RecurrenceMode mode);
RecurrenceMode parse_recurrence_mode(std::string_view text);

struct Recurrence {
  std::size_t first = 0;
  std::size_t period = 0;
  bool operator==(const Recurrence&) const = default;
};

bool configurations_match(const Configuration& a, const Configuration& b, double eps,
                          RecurrenceMode mode);

/// Incremental repetition finder. push() returns the first repetition found, if any.
class RecurrenceDetector {
 public:
  explicit RecurrenceDetector(double eps = kEpsSnap, RecurrenceMode mode = RecurrenceMode::Anonymous)
      : eps_(eps), mode_(mode) {}

  /// Configurations only match when their tags agree as well.
  std::optional<Recurrence> push(const Configuration& config, std::uint64_t tag = 0);
  std::size_t size() const { return seen_.size(); }

 private:
  std::uint64_t key(const Configuration& config) const;

  double eps_;
  RecurrenceMode mode_;
  std::vector<Configuration> seen_;
  std::vector<std::uint64_t> tags_;
  std::unordered_multimap<std::uint64_t, std::size_t> index_;
};

std::optional<Recurrence> detect_recurrence(std::span<const Configuration> trace,
                                            double eps = kEpsSnap,
                                            RecurrenceMode mode = RecurrenceMode::Anonymous);

}  // namespace gather
