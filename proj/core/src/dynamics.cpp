#include "onsager/dynamics.hpp"

#include <cmath>
#include <string>

#include "onsager/error.hpp"

namespace onsager {

Energy f_divergence_energy(const MobilityModel& model, const ReversibleChain& chain) {
  if (!model.has_f()) raise(ErrorKind::NoDivergenceDefined, "the geometric mean has no paired f");
  Energy F;
  F.value = [&model, &chain](const VertexField& p) { return f_divergence(model, chain, p); };
  F.gradient = [&model, &chain](const VertexField& p) { return f_divergence_gradient(model, chain, p); };
  F.hessian = [&model, &chain](const VertexField& p) -> Eigen::MatrixXd {
    return f_divergence_hessian_diag(model, chain, p).asDiagonal();
  };
  return F;
}

Eigen::MatrixXd energy_hessian(const Energy& F, const VertexField& p) {
  if (F.hessian) return F.hessian(p);
  const int n = static_cast<int>(p.size());
  const double h = 1e-5;
  Eigen::MatrixXd H(n, n);
  for (int k = 0; k < n; ++k) {
    VertexField e = VertexField::Zero(n);
    e(k) = h;
    H.col(k) = (F.gradient(p + e) - F.gradient(p - e)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

VertexField master_rhs(const ReversibleChain& chain, const VertexField& p) {
  const Eigen::MatrixXd& Q = chain.Q();
  // (Q^T p)_i - p_i sum_j Q_ij
  return Q.transpose() * p - p.cwiseProduct(Q.rowwise().sum());
}

VertexField gradient_flow_rhs(const ReversibleChain& chain, const MobilityModel& model,
                              const SimplexPoint& p) {
  const EdgeMatrix th = theta(model, chain, p);
  return -(onsager_L(chain, th) * f_divergence_gradient(model, chain, p.p()));
}

VertexField metric_gradient(const ReversibleChain& chain, const MobilityModel& model,
                            const Energy& F, const SimplexPoint& p) {
  const EdgeMatrix th = theta(model, chain, p);
  return onsager_L(chain, th) * F.gradient(p.p());
}

double dissipation_quadratic(const ReversibleChain& chain, const MobilityModel& model,
                             const SimplexPoint& p) {
  const VertexField g = f_divergence_gradient(model, chain, p.p());
  return -g.dot(onsager_L(chain, theta(model, chain, p)) * g);
}

double dissipation_edgesum(const ReversibleChain& chain, const MobilityModel& model,
                           const SimplexPoint& p) {
  const VertexField g = f_divergence_gradient(model, chain, p.p());
  const EdgeMatrix G = grad_matrix(chain, g);
  return -0.5 * G.cwiseProduct(G).cwiseProduct(theta(model, chain, p)).sum();
}

namespace {

VertexField rk4_step(const ReversibleChain& chain, const VertexField& p, double h) {
  const VertexField k1 = master_rhs(chain, p);
  const VertexField k2 = master_rhs(chain, p + 0.5 * h * k1);
  const VertexField k3 = master_rhs(chain, p + 0.5 * h * k2);
  const VertexField k4 = master_rhs(chain, p + h * k3);
  return p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool interior(const VertexField& p, double eps) { return p.minCoeff() >= eps; }

}  // namespace

Trajectory integrate(const ReversibleChain& chain, const MobilityModel& model, const SimplexPoint& p0,
                     double T, double dt, const IntegrateOptions& opts) {
  if (!(dt > 0.0) || !(T >= 0.0)) raise(ErrorKind::InvalidArgument, "need dt > 0 and T >= 0");
  if (p0.n() != chain.n()) raise(ErrorKind::InvalidArgument, "point dimension does not match chain");
  if (!model.has_f()) raise(ErrorKind::NoDivergenceDefined, "energy record needs an f-divergence");
  SimplexPoint::check(p0.p(), opts.eps_boundary);

  Trajectory tr;
  auto record = [&](double t, const VertexField& p) {
    const SimplexPoint sp(p, opts.eps_boundary);
    tr.times.push_back(t);
    tr.states.push_back(p);
    tr.energy.push_back(f_divergence(model, chain, p));
    tr.dissipation_quadratic.push_back(dissipation_quadratic(chain, model, sp));
    tr.dissipation_edgesum.push_back(dissipation_edgesum(chain, model, sp));
  };

  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  VertexField p = p0.p();
  record(0.0, p);
  for (long k = 0; k < steps; ++k) {
    const double t0 = k * dt;
    const double h = std::min(dt, T - t0);
    VertexField next;
    bool ok = false;
    for (int halvings = 0; halvings <= opts.max_halvings && !ok; ++halvings) {
      const long sub = 1L << halvings;
      next = p;
      ok = true;
      for (long s = 0; s < sub && ok; ++s) {
        next = rk4_step(chain, next, h / static_cast<double>(sub));
        ok = interior(next, opts.eps_boundary);
      }
    }
    if (!ok)
      raise(ErrorKind::StepLeavesSimplex,
            "step at t = " + std::to_string(t0) + " leaves the interior after all dt halvings");
    p = next;
    record(k + 1 == steps ? T : t0 + h, p);
  }
  return tr;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd B = A / std::ldexp(1.0, squarings);
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * B / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

VertexField master_exact(const ReversibleChain& chain, const VertexField& p0, double t) {
  Eigen::MatrixXd A = chain.Q();
  A.diagonal() = -chain.Q().rowwise().sum();
  return expm(t * A.transpose()) * p0;
}

}  // namespace onsager
