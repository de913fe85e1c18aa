#pragma once

#include "gather/model.hpp"
#include "gather/random.hpp"

#include <string_view>

namespace gather {

enum class AlgorithmKind {
  ProbBasic,
  DetFT,
  DetFTNaive,  ///< non-conforming: straight moves only, kept to exhibit the endless cycle
  ProbFT,
  TwoRobotDet,
  Barycenter,
  NearestNeighbor,
};

std::string_view to_string(AlgorithmKind kind);
AlgorithmKind parse_algorithm(std::string_view name);

/// The multiplicity mode an algorithm is designed for.
MultiplicityMode required_mode(AlgorithmKind kind);
bool is_deterministic(AlgorithmKind kind);

struct Decision {
  enum class Kind { Stay, MoveTo };
  Kind kind = Kind::Stay;
  Point target = Point::Zero();  ///< local coordinates, meaningful for MoveTo

  static Decision stay() { return {}; }
  static Decision move_to(const Point& p) { return {Kind::MoveTo, p}; }
  bool moves() const { return kind == Kind::MoveTo; }
};

/// When a robot heading for a castle counts as blocked.
enum class BlockedRule {
  /// Robots strictly between p and q reach max(1, mulmax - 1).
  Proof,
  /// robots_on_segment(p, q) >= 2 * mulmax, robots at q included.
  Listing,
};

std::string_view to_string(BlockedRule rule);
BlockedRule parse_blocked_rule(std::string_view text);

struct AlgorithmOptions {
  BlockedRule blocked_rule = BlockedRule::Proof;
};

/// A similarity fixing the origin: scale * rotate * reflect.
struct Similarity {
  double rotation = 0.0;
  double scale = 1.0;
  int chirality = 1;

  Point apply(const Point& p) const;
  Point invert(const Point& p) const;
};

struct CanonicalObservation {
  Similarity transform;
  Observation observation;  ///< same point order as the input, farthest point at distance 1
};

/// Frame-free normal form of an observation. Two observations that differ by a
/// rotation, reflection and scaling about the observer map to the same points.
CanonicalObservation canonicalize(const Observation& obs);

Decision alg_prob_basic(const Observation& obs, RandomSource& rng);
Decision alg_two_robot_det(const Observation& obs);
Decision alg_det_ft(const Observation& obs, const AlgorithmOptions& options = {});
Decision alg_det_ft_naive(const Observation& obs);
Decision alg_prob_ft(const Observation& obs, RandomSource& rng,
                     const AlgorithmOptions& options = {});
Decision alg_barycenter(const Observation& obs);
Decision alg_nearest_neighbor(const Observation& obs);

Decision decide(AlgorithmKind kind, const Observation& obs, RandomSource& rng,
                const AlgorithmOptions& options = {});

/// Side-move destination for a robot at p heading for castle q, in the
/// coordinates of `obs`. Clockwise is the negative orientation of those coordinates.
Point side_move_target(const Point& p, const Point& q, const Observation& obs,
                       double eps = 1e-9);

/// Normalized side-move length a'(alpha) for a Voronoi boundary through v_p
/// whose inverse slope (dx/dy, measured from the ray q->p) is m.
double side_move_scaled_length(double alpha, double theta_plus, double m);

}  // namespace gather
