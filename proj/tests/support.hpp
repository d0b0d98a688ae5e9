#pragma once

#include <random>

#include "onsager/lattice3.hpp"

namespace testsupport {

using onsager::VertexField;
using Rng = std::mt19937_64;

// Reversible chain from random symmetric weights on a random connected graph.
inline onsager::ReversibleChain random_reversible(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 3.0), coin(0.0, 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
    w(i, j) = w(j, i) = u(rng);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (w(i, j) == 0.0 && coin(rng) < 0.5) w(i, j) = w(j, i) = u(rng);
  Eigen::VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi(i) = u(rng);
  pi /= pi.sum();
  // Q_ij = w_ij / pi_i satisfies detailed balance with respect to pi.
  Eigen::MatrixXd Q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Q(i, j) = i == j ? 0.0 : w(i, j) / pi(i);
  return onsager::build_reversible_chain(Q);
}

inline VertexField random_interior(int n, Rng& rng, double floor = 0.05) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VertexField p(n);
  for (int i = 0; i < n; ++i) p(i) = floor + u(rng);
  return p / p.sum();
}

inline VertexField random_mean_zero(int n, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  VertexField v(n);
  for (int i = 0; i < n; ++i) v(i) = z(rng);
  return v.array() - v.mean();
}

inline VertexField lattice_point(double a, double b, double c) {
  VertexField p(3);
  p << a, b, c;
  return p;
}

// The three built-in families in the reference convention.
inline onsager::MobilityModel model_case(int k) {
  switch (k % 3) {
    case 0:
      return onsager::MobilityModel::kl();
    case 1:
      return onsager::MobilityModel::alpha(-1.0);
    default:
      return onsager::MobilityModel::geometric(0.7);
  }
}

// f(z) = z^2 / 2 gives theta = 1 identically.
inline onsager::MobilityModel constant_mobility() { return onsager::MobilityModel::alpha(3.0); }

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testsupport
