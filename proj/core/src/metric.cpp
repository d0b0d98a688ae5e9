#include "onsager/metric.hpp"

#include <cmath>

#include "onsager/error.hpp"

namespace onsager {

Eigen::MatrixXd onsager_L(const ReversibleChain& chain, const EdgeMatrix& a) {
  return weighted_laplacian(chain, a);
}

OnsagerMatrix onsager_matrix(const ReversibleChain& chain, const EdgeMatrix& theta) {
  OnsagerMatrix out;
  out.L = onsager_L(chain, theta);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.L);
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  // Pin the kernel vector to the normalized constant so the frame excludes it exactly.
  const int n = static_cast<int>(out.L.rows());
  out.eigenvectors.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return out;
}

Eigen::MatrixXd pseudo_inverse(const OnsagerMatrix& L) {
  const int n = static_cast<int>(L.L.rows());
  const double lmax = L.eigenvalues(n - 1);
  const double cutoff = kKernelCutoff * std::max(lmax, 0.0);
  int kernel = 0;
  for (int k = 0; k < n; ++k)
    if (L.eigenvalues(k) < cutoff) ++kernel;
  if (kernel > 1 || !(lmax > 0.0))
    raise(ErrorKind::NearSingular, "Onsager matrix has more than one kernel direction");
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k)
    R.noalias() += L.eigenvectors.col(k) * L.eigenvectors.col(k).transpose() / L.eigenvalues(k);
  return 0.5 * (R + R.transpose());
}

VertexField mean_zero(const VertexField& phi) {
  return phi.array() - phi.mean();
}

TangentPotential::TangentPotential(const VertexField& phi, const Eigen::MatrixXd& L)
    : phi_(mean_zero(phi)), v_(L * phi_) {}

LocalGeometry::LocalGeometry(const ReversibleChain& chain, const MobilityModel& model,
                             const SimplexPoint& p)
    : chain_(&chain), model_(&model), p_(p), jet_(theta_jet(model, chain, p)),
      onsager_(onsager_matrix(chain, jet_.theta)), R_(pseudo_inverse(onsager_)) {}

double inner_product(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2) {
  return phi1.dot(g.L() * phi2);
}

double inner_product_edges(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2) {
  const EdgeMatrix a = g.grad(phi1), b = g.grad(phi2);
  return 0.5 * (a.cwiseProduct(b).cwiseProduct(g.theta())).sum();
}

double inner_product(const ReversibleChain& chain, const EdgeMatrix& theta, const VertexField& phi1,
                     const VertexField& phi2) {
  return phi1.dot(onsager_L(chain, theta) * phi2);
}

Frame orthonormal_frame(const OnsagerMatrix& L) {
  pseudo_inverse(L);  // NearSingular check
  const int n = static_cast<int>(L.L.rows());
  Frame f;
  for (int k = 1; k < n; ++k) {
    const double s = std::sqrt(L.eigenvalues(k));
    f.vectors.push_back(s * L.eigenvectors.col(k));
    f.potentials.push_back(L.eigenvectors.col(k) / s);
  }
  return f;
}

double arc_length(const ReversibleChain& chain, const MobilityModel& model,
                  const std::vector<double>& times, const std::vector<VertexField>& samples) {
  const size_t m = samples.size();
  if (times.size() != m) raise(ErrorKind::InvalidArgument, "times and samples differ in length");
  if (m < 2) return 0.0;
  for (size_t k = 1; k < m; ++k)
    if (!(times[k] > times[k - 1])) raise(ErrorKind::InvalidArgument, "time grid must increase");

  // Three-point derivative stencils (central inside, one-sided second order at the ends).
  auto derivative = [&](size_t k) -> VertexField {
    if (m == 2) return (samples[1] - samples[0]) / (times[1] - times[0]);
    size_t c = k == 0 ? 1 : (k == m - 1 ? m - 2 : k);
    const double h1 = times[c] - times[c - 1], h2 = times[c + 1] - times[c];
    const VertexField& y0 = samples[c - 1];
    const VertexField& y1 = samples[c];
    const VertexField& y2 = samples[c + 1];
    if (k == c)
      return -h2 / (h1 * (h1 + h2)) * y0 + (h2 - h1) / (h1 * h2) * y1 + h1 / (h2 * (h1 + h2)) * y2;
    if (k < c)
      return -(2 * h1 + h2) / (h1 * (h1 + h2)) * y0 + (h1 + h2) / (h1 * h2) * y1 - h1 / (h2 * (h1 + h2)) * y2;
    return h2 / (h1 * (h1 + h2)) * y0 - (h1 + h2) / (h1 * h2) * y1 + (2 * h2 + h1) / (h2 * (h1 + h2)) * y2;
  };
  std::vector<double> speed(m);
  for (size_t k = 0; k < m; ++k) {
    const VertexField d = derivative(k);
    const LocalGeometry g(chain, model, SimplexPoint(samples[k]));
    speed[k] = std::sqrt(std::max(0.0, d.dot(g.R() * d)));
  }

  const double h0 = times[1] - times[0];
  bool uniform = true;
  for (size_t k = 1; k < m; ++k)
    if (std::abs((times[k] - times[k - 1]) - h0) > 1e-12 * std::max(1.0, std::abs(h0))) uniform = false;
  double len = 0.0;
  if (uniform && m >= 3 && (m - 1) % 2 == 0) {
    for (size_t k = 0; k + 2 < m; k += 2) len += h0 / 3.0 * (speed[k] + 4.0 * speed[k + 1] + speed[k + 2]);
  } else {
    for (size_t k = 1; k < m; ++k) len += 0.5 * (times[k] - times[k - 1]) * (speed[k] + speed[k - 1]);
  }
  return len;
}

}  // namespace onsager
