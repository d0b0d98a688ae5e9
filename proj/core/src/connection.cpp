#include "onsager/connection.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "onsager/error.hpp"

namespace onsager {

namespace {

EdgeMatrix contract_d1(const EdgeMatrix& d1, const VertexField& v) {
  return (d1.array().colwise() * v.array()).matrix() +
         (d1.transpose().array().rowwise() * v.transpose().array()).matrix();
}

VertexField gamma_from(const ReversibleChain& chain, const EdgeMatrix& d1, const VertexField& a,
                       const VertexField& b) {
  const EdgeMatrix ga = grad_matrix(chain, a), gb = grad_matrix(chain, b);
  return ga.cwiseProduct(gb).cwiseProduct(d1).rowwise().sum();
}

// Mobility data at a point reached by an ODE stage; only positivity is enforced.
struct StagePoint {
  ThetaJet jet;
  Eigen::MatrixXd L;
};

StagePoint stage(const ReversibleChain& chain, const MobilityModel& model, const VertexField& p,
                 double eps) {
  if (p.minCoeff() < eps) raise(ErrorKind::StepLeavesSimplex, "ODE stage left the interior");
  StagePoint s{theta_jet_unchecked(model, chain, p), {}};
  s.L = onsager_L(chain, s.jet.theta);
  return s;
}

struct GeoState {
  VertexField gamma;
  VertexField phi;
};

GeoState geo_rhs(const ReversibleChain& chain, const MobilityModel& model, const GeoState& y,
                 double eps) {
  const StagePoint s = stage(chain, model, y.gamma, eps);
  return {s.L * y.phi, -0.5 * gamma_from(chain, s.jet.d1, y.phi, y.phi)};
}

GeoState geo_step(const ReversibleChain& chain, const MobilityModel& model, const GeoState& y,
                  double h, double eps) {
  auto axpy = [](const GeoState& a, double c, const GeoState& k) {
    return GeoState{a.gamma + c * k.gamma, a.phi + c * k.phi};
  };
  const GeoState k1 = geo_rhs(chain, model, y, eps);
  const GeoState k2 = geo_rhs(chain, model, axpy(y, 0.5 * h, k1), eps);
  const GeoState k3 = geo_rhs(chain, model, axpy(y, 0.5 * h, k2), eps);
  const GeoState k4 = geo_rhs(chain, model, axpy(y, h, k3), eps);
  GeoState out{y.gamma + h / 6.0 * (k1.gamma + 2.0 * k2.gamma + 2.0 * k3.gamma + k4.gamma),
               y.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi)};
  out.phi = mean_zero(out.phi);
  return out;
}

double speed_at(const ReversibleChain& chain, const MobilityModel& model, const GeoState& y,
                double eps) {
  const StagePoint s = stage(chain, model, y.gamma, eps);
  return std::sqrt(std::max(0.0, y.phi.dot(s.L * y.phi)));
}

// Orthonormal basis of the mean-zero subspace (columns).
Eigen::MatrixXd mean_zero_basis(int n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  A.col(0).setOnes();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(n - 1);
}

}  // namespace

EdgeMatrix directional_theta_along(const LocalGeometry& g, const VertexField& v) {
  return contract_d1(g.jet().d1, v);
}

EdgeMatrix directional_theta(const LocalGeometry& g, const VertexField& phi) {
  return contract_d1(g.jet().d1, g.velocity(phi));
}

VertexField gamma_op(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2) {
  return gamma_from(g.chain(), g.jet().d1, phi1, phi2);
}

VertexField commutator(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2) {
  return g.L_of(directional_theta(g, phi1)) * phi2 - g.L_of(directional_theta(g, phi2)) * phi1;
}

ConnectionValue levi_civita(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2,
                            const std::optional<VertexField>& phi3) {
  ConnectionValue out;
  out.vector = 0.5 * (g.L_of(directional_theta(g, phi1)) * phi2 -
                      g.L_of(directional_theta(g, phi2)) * phi1 + g.L() * gamma_op(g, phi1, phi2));
  if (phi3) out.scalar_form = phi3->dot(out.vector);
  return out;
}

VertexField levi_civita_potential(const LocalGeometry& g, const VertexField& phi1,
                                  const VertexField& phi2) {
  return g.R() * levi_civita(g, phi1, phi2).vector;
}

double levi_civita_scalar_gamma(const LocalGeometry& g, const VertexField& phi1,
                                const VertexField& phi2, const VertexField& phi3) {
  const EdgeMatrix g1 = g.grad(phi1), g2 = g.grad(phi2), g3 = g.grad(phi3);
  const EdgeMatrix G23 = g.grad(gamma_op(g, phi2, phi3));
  const EdgeMatrix G13 = g.grad(gamma_op(g, phi1, phi3));
  const EdgeMatrix G12 = g.grad(gamma_op(g, phi1, phi2));
  const EdgeMatrix s = g1.cwiseProduct(G23) - g2.cwiseProduct(G13) + g3.cwiseProduct(G12);
  return 0.25 * s.cwiseProduct(g.theta()).sum();
}

GeodesicRecord geodesic_ivp(const ReversibleChain& chain, const MobilityModel& model,
                            const SimplexPoint& p0, const VertexField& phi0, double T, double dt,
                            const OdeOptions& opts) {
  if (!(dt > 0.0) || !(T >= 0.0)) raise(ErrorKind::InvalidArgument, "need dt > 0 and T >= 0");
  if (p0.n() != chain.n() || phi0.size() != chain.n())
    raise(ErrorKind::InvalidArgument, "dimension mismatch");
  SimplexPoint::check(p0.p(), opts.eps_boundary);
  GeoState y{p0.p(), mean_zero(phi0)};
  GeodesicRecord rec;
  auto push = [&](double t) {
    rec.times.push_back(t);
    rec.gamma.push_back(y.gamma);
    rec.phi.push_back(y.phi);
    rec.speed.push_back(speed_at(chain, model, y, opts.eps_boundary));
  };
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  push(0.0);
  for (long k = 0; k < steps; ++k) {
    const double t0 = k * dt;
    const double h = std::min(dt, T - t0);
    y = geo_step(chain, model, y, h, opts.eps_boundary);
    if (y.gamma.minCoeff() < opts.eps_boundary)
      raise(ErrorKind::StepLeavesSimplex, "geodesic reached the boundary margin");
    if (opts.record || k + 1 == steps) push(k + 1 == steps ? T : t0 + h);
  }
  return rec;
}

BvpResult geodesic_bvp(const ReversibleChain& chain, const MobilityModel& model,
                       const SimplexPoint& p0, const SimplexPoint& p1, const BvpOptions& opts) {
  const int n = chain.n();
  if (p0.n() != n || p1.n() != n) raise(ErrorKind::InvalidArgument, "dimension mismatch");
  const double dt = 1.0 / opts.steps;
  const Eigen::MatrixXd B = mean_zero_basis(n);
  OdeOptions quiet;
  quiet.record = false;
  if ((p0.p() - p1.p()).cwiseAbs().maxCoeff() == 0.0) {
    BvpResult still;
    still.phi0 = VertexField::Zero(n);
    still.path = geodesic_ivp(chain, model, p0, still.phi0, 1.0, dt);
    return still;
  }

  auto shoot = [&](const Eigen::VectorXd& z, Eigen::VectorXd& r) -> bool {
    try {
      GeodesicRecord rec = geodesic_ivp(chain, model, p0, B * z, 1.0, dt, quiet);
      r = B.transpose() * (rec.gamma.back() - p1.p());
      return std::isfinite(r.norm());
    } catch (const Error&) {
      return false;
    }
  };
  auto endpoint_gap = [&](const Eigen::VectorXd& z) {
    GeodesicRecord rec = geodesic_ivp(chain, model, p0, B * z, 1.0, dt, quiet);
    return (rec.gamma.back() - p1.p()).cwiseAbs().maxCoeff();
  };

  // Linearized initial guess: potential of the chord at the midpoint.
  const SimplexPoint mid(0.5 * (p0.p() + p1.p()));
  const LocalGeometry gm(chain, model, mid);
  const Eigen::VectorXd z_lin = B.transpose() * (gm.R() * (p1.p() - p0.p()));

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best_res = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z = z_lin;
  int total_iter = 0;

  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    Eigen::VectorXd z = z_lin;
    if (attempt > 0) {
      const double s = 0.3 * std::max(z_lin.norm(), 1e-3);
      for (int k = 0; k < z.size(); ++k) z(k) += s * normal(rng);
    }
    Eigen::VectorXd r;
    if (!shoot(z, r)) continue;
    double lambda = 1.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      ++total_iter;
      const double res = r.cwiseAbs().maxCoeff();
      if (res < best_res) {
        best_res = res;
        best_z = z;
      }
      if (res < 0.5 * opts.tolerance) break;
      Eigen::MatrixXd J(n - 1, n - 1);
      bool jac_ok = true;
      for (int k = 0; k < n - 1 && jac_ok; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(z(k)));
        Eigen::VectorXd zp = z, zm = z, rp, rm;
        zp(k) += h;
        zm(k) -= h;
        jac_ok = shoot(zp, rp) && shoot(zm, rm);
        if (jac_ok) J.col(k) = (rp - rm) / (2.0 * h);
      }
      if (!jac_ok) break;
      const Eigen::VectorXd step = J.fullPivLu().solve(-r);
      if (!step.allFinite()) break;
      bool accepted = false;
      for (int damp = 0; damp < 40; ++damp) {
        Eigen::VectorXd zn = z + lambda * step, rn;
        if (shoot(zn, rn) && rn.norm() < r.norm()) {
          z = zn;
          r = rn;
          accepted = true;
          lambda = std::min(1.0, 2.0 * lambda);
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) break;
    }
    const double res = r.cwiseAbs().maxCoeff();
    if (res < best_res) {
      best_res = res;
      best_z = z;
    }
    if (best_res < opts.tolerance) break;
  }

  double gap = std::numeric_limits<double>::infinity();
  try {
    gap = endpoint_gap(best_z);
  } catch (const Error&) {
  }
  if (!(gap < opts.tolerance)) {
    std::ostringstream os;
    os.precision(6);
    os << "shooting did not converge; best endpoint residual " << gap;
    raise(ErrorKind::BvpNoConvergence, os.str());
  }
  BvpResult out;
  out.phi0 = B * best_z;
  out.path = geodesic_ivp(chain, model, p0, out.phi0, 1.0, dt);
  out.residual = gap;
  out.iterations = total_iter;
  out.length = arc_length(chain, model, out.path.times, out.path.gamma);
  return out;
}

double distance(const ReversibleChain& chain, const MobilityModel& model, const SimplexPoint& p0,
                const SimplexPoint& p1) {
  if ((p0.p() - p1.p()).cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return geodesic_bvp(chain, model, p0, p1).length;
}

namespace {

struct TransportY {
  VertexField gamma;
  VertexField phi;
  std::vector<VertexField> eta;
};

std::vector<VertexField> eta_rhs(const ReversibleChain& chain, const MobilityModel& model,
                                 const VertexField& gamma, const VertexField& phi,
                                 const std::vector<VertexField>& eta, double eps) {
  if (gamma.minCoeff() < eps) raise(ErrorKind::BoundaryPoint, "transport curve left the interior");
  const ThetaJet jet = theta_jet_unchecked(model, chain, gamma);
  const OnsagerMatrix om = onsager_matrix(chain, jet.theta);
  const Eigen::MatrixXd R = pseudo_inverse(om);
  const Eigen::MatrixXd& L = om.L;
  const Eigen::MatrixXd L_phi = onsager_L(chain, contract_d1(jet.d1, L * phi));
  std::vector<VertexField> out;
  out.reserve(eta.size());
  for (const VertexField& e : eta) {
    const Eigen::MatrixXd L_eta = onsager_L(chain, contract_d1(jet.d1, L * e));
    const VertexField w = L_phi * e - L_eta * phi + L * gamma_from(chain, jet.d1, phi, e);
    out.push_back(-0.5 * (R * w));
  }
  return out;
}

std::vector<TransportState> transport_geodesic(const ReversibleChain& chain,
                                               const MobilityModel& model, const GeodesicPath& path,
                                               const std::vector<VertexField>& eta0) {
  const double eps = kBoundaryEps;
  SimplexPoint::check(path.p0, eps);
  if (!(path.dt > 0.0) || !(path.T >= 0.0)) raise(ErrorKind::InvalidArgument, "need dt > 0 and T >= 0");
  TransportY y{path.p0, mean_zero(path.phi0), {}};
  for (const VertexField& e : eta0) y.eta.push_back(mean_zero(e));

  auto rhs = [&](const TransportY& s) {
    const GeoState d = geo_rhs(chain, model, {s.gamma, s.phi}, eps);
    return TransportY{d.gamma, d.phi, eta_rhs(chain, model, s.gamma, s.phi, s.eta, eps)};
  };
  auto axpy = [](const TransportY& a, double c, const TransportY& k) {
    TransportY r{a.gamma + c * k.gamma, a.phi + c * k.phi, a.eta};
    for (size_t m = 0; m < r.eta.size(); ++m) r.eta[m] += c * k.eta[m];
    return r;
  };

  std::vector<TransportState> out;
  out.push_back({0.0, y.gamma, y.phi, y.eta});
  const long steps = static_cast<long>(std::ceil(path.T / path.dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    const double t0 = k * path.dt;
    const double h = std::min(path.dt, path.T - t0);
    const TransportY k1 = rhs(y);
    const TransportY k2 = rhs(axpy(y, 0.5 * h, k1));
    const TransportY k3 = rhs(axpy(y, 0.5 * h, k2));
    const TransportY k4 = rhs(axpy(y, h, k3));
    TransportY next = axpy(axpy(axpy(axpy(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
    next.phi = mean_zero(next.phi);
    for (VertexField& e : next.eta) e = mean_zero(e);
    if (next.gamma.minCoeff() < eps) raise(ErrorKind::BoundaryPoint, "transport curve left the interior");
    y = std::move(next);
    out.push_back({k + 1 == steps ? path.T : t0 + h, y.gamma, y.phi, y.eta});
  }
  return out;
}

std::vector<TransportState> transport_curve(const ReversibleChain& chain, const MobilityModel& model,
                                            const SampledCurve& curve,
                                            const std::vector<VertexField>& eta0) {
  const double eps = kBoundaryEps;
  const size_t m = curve.samples.size();
  if (curve.times.size() != m || m < 3 || (m - 1) % 2 != 0)
    raise(ErrorKind::InvalidArgument, "sampled curve needs an odd number (>= 3) of samples");
  const double h = curve.times[1] - curve.times[0];
  for (size_t k = 1; k < m; ++k)
    if (std::abs(curve.times[k] - curve.times[k - 1] - h) > 1e-9 * std::abs(h))
      raise(ErrorKind::InvalidArgument, "sampled curve must be uniform in time");

  // Driving potential Phi = R(theta(gamma)) gamma' with second-order differences.
  std::vector<VertexField> phi(m);
  for (size_t k = 0; k < m; ++k) {
    VertexField d;
    if (k == 0)
      d = (-3.0 * curve.samples[0] + 4.0 * curve.samples[1] - curve.samples[2]) / (2.0 * h);
    else if (k == m - 1)
      d = (3.0 * curve.samples[m - 1] - 4.0 * curve.samples[m - 2] + curve.samples[m - 3]) / (2.0 * h);
    else
      d = (curve.samples[k + 1] - curve.samples[k - 1]) / (2.0 * h);
    const LocalGeometry g(chain, model, SimplexPoint(curve.samples[k], eps));
    phi[k] = mean_zero(g.R() * d);
  }

  std::vector<VertexField> eta;
  for (const VertexField& e : eta0) eta.push_back(mean_zero(e));
  auto axpy = [](const std::vector<VertexField>& a, double c, const std::vector<VertexField>& k) {
    std::vector<VertexField> r = a;
    for (size_t j = 0; j < r.size(); ++j) r[j] += c * k[j];
    return r;
  };
  std::vector<TransportState> out;
  out.push_back({curve.times[0], curve.samples[0], phi[0], eta});
  for (size_t k = 0; k + 2 < m; k += 2) {
    const double H = 2.0 * h;
    const auto& g0 = curve.samples[k];
    const auto& g1 = curve.samples[k + 1];
    const auto& g2 = curve.samples[k + 2];
    const auto k1 = eta_rhs(chain, model, g0, phi[k], eta, eps);
    const auto k2 = eta_rhs(chain, model, g1, phi[k + 1], axpy(eta, 0.5 * H, k1), eps);
    const auto k3 = eta_rhs(chain, model, g1, phi[k + 1], axpy(eta, 0.5 * H, k2), eps);
    const auto k4 = eta_rhs(chain, model, g2, phi[k + 2], axpy(eta, H, k3), eps);
    eta = axpy(axpy(axpy(axpy(eta, H / 6.0, k1), H / 3.0, k2), H / 3.0, k3), H / 6.0, k4);
    for (VertexField& e : eta) e = mean_zero(e);
    out.push_back({curve.times[k + 2], g2, phi[k + 2], eta});
  }
  return out;
}

}  // namespace

std::vector<TransportState> parallel_transport(const ReversibleChain& chain,
                                               const MobilityModel& model, const PathSpec& path,
                                               const std::vector<VertexField>& eta0) {
  for (const VertexField& e : eta0)
    if (e.size() != chain.n()) raise(ErrorKind::InvalidArgument, "eta dimension mismatch");
  if (const auto* gp = std::get_if<GeodesicPath>(&path)) return transport_geodesic(chain, model, *gp, eta0);
  return transport_curve(chain, model, std::get<SampledCurve>(path), eta0);
}

double hessian_form(const LocalGeometry& g, const Energy& F, const VertexField& phi1,
                    const VertexField& phi2) {
  const VertexField& p = g.point().p();
  const Eigen::MatrixXd H = energy_hessian(F, p);
  const VertexField dF = F.gradient(p);
  const VertexField v1 = g.velocity(phi1), v2 = g.velocity(phi2);
  const VertexField w = g.L_of(directional_theta(g, phi1)) * phi2 +
                        g.L_of(directional_theta(g, phi2)) * phi1 - g.L() * gamma_op(g, phi1, phi2);
  return v1.dot(H * v2) + 0.5 * dF.dot(w);
}

double hessian_form_explicit(const LocalGeometry& g, const Energy& F, const VertexField& phi1,
                             const VertexField& phi2) {
  const int n = g.n();
  const VertexField& p = g.point().p();
  const Eigen::MatrixXd H = energy_hessian(F, p);
  const VertexField dF = F.gradient(p);
  const EdgeMatrix& sw = g.chain().sqrt_omega();
  const EdgeMatrix& th = g.theta();
  const EdgeMatrix g1 = g.grad(phi1), g2 = g.grad(phi2), gF = g.grad(dF);
  double quad = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (sw(i, j) == 0.0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (sw(k, l) == 0.0) continue;
          const double dd = sw(i, j) * sw(k, l) * (H(i, k) - H(i, l) - H(j, k) + H(j, l));
          quad += dd * g1(i, j) * g2(k, l) * th(i, j) * th(k, l);
        }
    }
  const EdgeMatrix lin = g1.cwiseProduct(g.grad(gamma_op(g, phi2, dF))) +
                         g2.cwiseProduct(g.grad(gamma_op(g, phi1, dF))) -
                         gF.cwiseProduct(g.grad(gamma_op(g, phi1, phi2)));
  return 0.25 * quad + 0.25 * lin.cwiseProduct(th).sum();
}

}  // namespace onsager
