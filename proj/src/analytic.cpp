#include "gather/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace gather::analytic {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t j = 1; j <= k; ++j) c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  return c;
}

double balance_probability(std::size_t i, std::size_t o, double M) {
  if (!(M >= 2.0)) throw std::invalid_argument("multiplicity M must be at least 2");
  const double r = 1.0 / (M - 1.0);
  double sum = 1.0;
  for (std::size_t m = 1; m <= std::min(i, o); ++m)
    sum += binomial(i, m) * binomial(o, m) * std::pow(r, 2.0 * static_cast<double>(m));
  return std::pow(1.0 - 1.0 / M, static_cast<double>(i + o)) * sum;
}

double increase_probability(std::size_t i, std::size_t o, std::size_t x, double M) {
  if (x > i) throw std::invalid_argument("x cannot exceed the number of incoming robots");
  return binomial(i, x) * std::pow(1.0 / M, static_cast<double>(x)) * balance_probability(i - x, o, M);
}

double single_castle_lower_bound(const std::vector<CastleStats>& castles, double M) {
  if (castles.size() <= 1) return 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < castles.size(); ++k) {
    if (castles[k].incoming == 0) continue;
    double term = increase_probability(castles[k].incoming, castles[k].outgoing, 1, M);
    for (std::size_t other = 0; other < castles.size() && term > 0.0; ++other) {
      if (other == k) continue;
      for (std::size_t x = 1; x <= castles[other].incoming; ++x)
        term *= 1.0 - increase_probability(castles[other].incoming, castles[other].outgoing, x, M);
    }
    total += term;
  }
  return total;
}

std::size_t MarkovResult::index_of(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == state) return i;
  throw std::invalid_argument("no state '" + state + "'");
}

MarkovResult markov_absorption(std::size_t n, double p) {
  if (n < 3) throw std::invalid_argument("the castle chain needs n >= 3");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  const std::size_t half = n / 2;

  MarkovResult result;
  result.states.push_back("D");
  result.states.push_back("0");
  for (std::size_t k = 2; k <= half; ++k) result.states.push_back(std::to_string(k));
  result.states.push_back("1");
  result.states.push_back("G");
  const std::size_t S = result.states.size();
  const std::size_t D = 0, Z = 1, ONE = S - 2, G = S - 1;
  auto castle_state = [&](std::size_t count) -> std::size_t {
    if (count == 0) return Z;
    if (count == 1) return ONE;
    return count;  // "2" sits at index 2, and so on
  };

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
  for (std::size_t x = 0; x <= half; ++x) {
    const double w = binomial(half, x) / std::pow(2.0, static_cast<double>(half));
    P(D, x == 0 ? D : castle_state(x)) += w;
  }
  P(Z, castle_state(half)) = 1.0;
  for (std::size_t k = 2; k <= half; ++k)
    for (std::size_t x = 0; x <= k; ++x)
      P(castle_state(k), castle_state(x)) +=
          binomial(k, x) * std::pow(p, static_cast<double>(x)) * std::pow(1.0 - p, static_cast<double>(k - x));
  P(ONE, G) = 1.0;
  P(G, G) = 1.0;

  // Fundamental-matrix solve over the transient states (all but G).
  const Eigen::Index T = static_cast<Eigen::Index>(S - 1);
  const Eigen::MatrixXd Q = P.topLeftCorner(T, T);
  const Eigen::VectorXd R = P.topRightCorner(T, 1);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(T, T) - Q;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw std::runtime_error("castle chain system is singular");

  result.transitions = P;
  result.expected_steps = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(S));
  result.absorption = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(S));
  result.expected_steps.head(T) = lu.solve(Eigen::VectorXd::Ones(T));
  result.absorption.head(T) = lu.solve(R);
  return result;
}

double sec_shrink_lower_bound(std::size_t n, std::size_t k) {
  if (n < 2 || k < 1) throw std::invalid_argument("need n >= 2 and k >= 1");
  const double K = static_cast<double>(n * k);
  const double nn = static_cast<double>(n);
  return 1.0 / (std::pow(2.0, nn * K - nn + 1.0) * std::pow(nn, 2.0 * (nn - 1.0)));
}

}  // namespace gather::analytic
