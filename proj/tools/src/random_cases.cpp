#include "random_cases.hpp"

#include <algorithm>
#include <numeric>

namespace onsager::cli {

ReversibleChain random_chain(int n, Rng& rng) {
  std::uniform_real_distribution<double> weight(0.5, 2.0), mass(0.5, 1.5), coin(0.0, 1.0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const int a = order[k];
    const int b = order[std::uniform_int_distribution<int>(0, k - 1)(rng)];
    omega(a, b) = omega(b, a) = weight(rng);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (omega(i, j) == 0.0 && coin(rng) < 0.4) omega(i, j) = omega(j, i) = weight(rng);
  Eigen::VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi(i) = mass(rng);
  pi /= pi.sum();
  return chain_from_weights(omega, pi);
}

VertexField random_point(int n, Rng& rng, double floor) {
  std::exponential_distribution<double> e(1.0);
  VertexField p(n);
  for (int i = 0; i < n; ++i) p(i) = e(rng);
  p /= p.sum();
  p = (floor / n) * VertexField::Ones(n) + (1.0 - floor) * p;
  p /= p.sum();
  return p;
}

VertexField random_potential(int n, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  VertexField phi(n);
  for (int i = 0; i < n; ++i) phi(i) = z(rng);
  return mean_zero(phi);
}

VertexField scale_potential(const LocalGeometry& g, const VertexField& phi, double ratio) {
  const VertexField v = g.velocity(phi);
  const double m = (v.array().abs() / g.point().p().array()).maxCoeff();
  return m > 0.0 ? VertexField(phi * (ratio / m)) : phi;
}

MobilityModel case_model(int k) {
  switch (k % 3) {
    case 0:
      return MobilityModel::kl();
    case 1:
      return MobilityModel::alpha(0.5);
    default:
      return MobilityModel::geometric(0.5);
  }
}

}  // namespace onsager::cli
