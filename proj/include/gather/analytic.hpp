#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace gather::analytic {

double binomial(std::size_t n, std::size_t k);

/// Probability that, with every robot moving independently with probability 1/M,
/// as many of the i incoming robots arrive as of the o outgoing robots leave.
double balance_probability(std::size_t i, std::size_t o, double M);

/// C(i,x) (1/M)^x Balance(i - x, o).
double increase_probability(std::size_t i, std::size_t o, std::size_t x, double M);

struct CastleStats {
  std::size_t incoming = 0;
  std::size_t outgoing = 0;
};

/// Lower bound on the probability that one activation round leaves a single castle:
/// the sum over castles k of Increase(i_k, o_k, 1) times, for every other castle,
/// the probability that it gains nothing.
double single_castle_lower_bound(const std::vector<CastleStats>& castles, double M);

struct MarkovResult {
  std::vector<std::string> states;   ///< D, 0, 2..floor(n/2), 1, G
  Eigen::VectorXd expected_steps;    ///< expected transitions to reach G, per state
  Eigen::VectorXd absorption;        ///< probability of reaching G, per state
  Eigen::MatrixXd transitions;       ///< row-stochastic, in `states` order

  std::size_t index_of(const std::string& state) const;
  double expected_from_start() const { return expected_steps(0); }
  double absorption_from_start() const { return absorption(0); }
};

/// Castle-count chain for n robots where each castle member moves with probability p.
MarkovResult markov_absorption(std::size_t n, double p);

/// Probability that a K = n k step fragment shrinks the enclosing circle by at least delta
/// is at least 1 / (2^(nK - n + 1) n^(2(n - 1))).
double sec_shrink_lower_bound(std::size_t n, std::size_t k);

}  // namespace gather::analytic
