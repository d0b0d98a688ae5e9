#include "validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "onsager/error.hpp"
#include "onsager/lattice3.hpp"
#include "random_cases.hpp"
#include "sweep.hpp"

namespace onsager::cli {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Runs body, which fills passed/detail, and applies the runtime budget.
template <class Body>
CriterionResult timed(int id, std::string name, double budget, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.budget_seconds = budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > budget) {
    r.passed = false;
    r.detail += "; runtime budget exceeded";
  }
  return r;
}

Rng rng_for(const SuiteOptions& opts, int id) { return Rng(opts.seed * 1000003ULL + id); }

double inf_norm(const VertexField& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

CriterionResult check_gradient_flow(const SuiteOptions& opts) {
  return timed(1, "gradient flow equals master equation", 1.0, [&](CriterionResult& r) {
    const ReversibleChain chain = preset_chain("triangle-reaction");
    const MobilityModel kl = MobilityModel::kl();
    Rng rng = rng_for(opts, 1);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const SimplexPoint p(random_point(3, rng, 0.02));
      worst = std::max(worst, inf_norm(gradient_flow_rhs(chain, kl, p) - master_rhs(chain, p.p())));
    }
    r.passed = worst < 1e-10;
    r.detail = "max |flow - master| = " + sci(worst) + " over 1000 points (tol 1e-10)";
  });
}

CriterionResult check_dissipation(const SuiteOptions&) {
  return timed(2, "free-energy dissipation and convergence", 1.0, [&](CriterionResult& r) {
    const ReversibleChain chain = preset_chain("triangle-reaction");
    const MobilityModel kl = MobilityModel::kl();
    VertexField p0(3);
    p0 << 0.7, 0.2, 0.1;
    const double T = 20.0;
    const Trajectory tr = integrate(chain, kl, SimplexPoint(p0), T, 1e-2);
    double rise = 0.0, gap = 0.0;
    for (size_t k = 0; k < tr.times.size(); ++k) {
      if (k > 0) rise = std::max(rise, tr.energy[k] - tr.energy[k - 1]);
      gap = std::max(gap, std::abs(tr.dissipation_quadratic[k] - tr.dissipation_edgesum[k]));
    }
    VertexField pi(3);
    pi << 4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0;
    const double to_pi = inf_norm(tr.states.back() - pi);
    const double to_exact = inf_norm(tr.states.back() - master_exact(chain, p0, T));
    r.passed = rise <= 1e-9 && gap < 1e-10 && to_pi < 1e-6 && to_exact < 1e-6;
    r.detail = "max energy rise " + sci(rise) + ", dissipation gap " + sci(gap) + ", |p(T)-pi| " +
               sci(to_pi) + ", |p(T)-expm| " + sci(to_exact);
  });
}

CriterionResult check_connection(const SuiteOptions& opts) {
  return timed(3, "connection identities", 10.0, [&](CriterionResult& r) {
    Rng rng = rng_for(opts, 3);
    double torsion = 0.0, symmetric = 0.0, compat = 0.0;
    for (int k = 0; k < 200; ++k) {
      const int n = 3 + k % 4;
      const ReversibleChain chain = random_chain(n, rng);
      const MobilityModel model = case_model(k);
      const SimplexPoint p(random_point(n, rng));
      const LocalGeometry g(chain, model, p);
      const VertexField f1 = scale_potential(g, random_potential(n, rng), 1.0);
      const VertexField f2 = random_potential(n, rng), f3 = random_potential(n, rng);
      const VertexField n12 = levi_civita(g, f1, f2).vector;
      const VertexField n21 = levi_civita(g, f2, f1).vector;
      const double scale = std::max({1.0, inf_norm(n12), inf_norm(n21)});
      torsion = std::max(torsion, inf_norm(n12 - n21 - commutator(g, f1, f2)) / scale);
      symmetric = std::max(symmetric, inf_norm(n12 + n21 - g.L() * gamma_op(g, f1, f2)) / scale);

      // d/ds <V2, V3> along V1 against the connection terms.
      const double eps = 1e-5;
      const VertexField v1 = g.velocity(f1);
      const LocalGeometry gp(chain, model, SimplexPoint(p.p() + eps * v1));
      const LocalGeometry gm(chain, model, SimplexPoint(p.p() - eps * v1));
      const double fd = (f2.dot(gp.L() * f3) - f2.dot(gm.L() * f3)) / (2 * eps);
      const double a = f3.dot(n12), b = f2.dot(levi_civita(g, f1, f3).vector);
      compat = std::max(compat, std::abs(fd - (a + b)) / std::max(std::abs(a) + std::abs(b), 1e-300));
    }
    r.passed = torsion < 1e-10 && symmetric < 1e-10 && compat < 1e-5;
    r.detail = "torsion " + sci(torsion) + ", symmetric part " + sci(symmetric) +
               " (tol 1e-10), metric compatibility " + sci(compat) + " (tol 1e-5), 200 cases";
  });
}

CriterionResult check_transport(const SuiteOptions& opts) {
  return timed(4, "parallel transport isometry", 30.0, [&](CriterionResult& r) {
    Rng rng = rng_for(opts, 4);
    double drift = 0.0;
    for (int k = 0; k < 50; ++k) {
      const int n = 3 + k % 3;
      const ReversibleChain chain = random_chain(n, rng);
      const MobilityModel model = case_model(k);
      const SimplexPoint p(random_point(n, rng));
      const LocalGeometry g(chain, model, p);
      const VertexField phi = scale_potential(g, random_potential(n, rng), 0.25);
      // Metric-orthonormal starting pair.
      VertexField e1 = random_potential(n, rng);
      e1 /= std::sqrt(inner_product(g, e1, e1));
      VertexField e2 = random_potential(n, rng);
      e2 -= inner_product(g, e1, e2) * e1;
      e2 /= std::sqrt(inner_product(g, e2, e2));
      const auto states = parallel_transport(chain, model, GeodesicPath{p.p(), phi, 1.0, 1e-3}, {e1, e2});
      for (const auto& s : states) {
        const Eigen::MatrixXd L = onsager_L(chain, theta_jet_unchecked(model, chain, s.gamma).theta);
        Eigen::Matrix2d G;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) G(a, b) = s.eta[a].dot(L * s.eta[b]);
        drift = std::max(drift, (G - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
      }
    }
    r.passed = drift < 1e-7;
    r.detail = "max Gram drift " + sci(drift) + " over 50 cases (tol 1e-7)";
  });
}

CriterionResult check_geodesics(const SuiteOptions& opts) {
  return timed(5, "geodesic speed and boundary-value solver", 30.0, [&](CriterionResult& r) {
    Rng rng = rng_for(opts, 5);
    double drift = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int n = 3 + k % 3;
      const ReversibleChain chain = random_chain(n, rng);
      const MobilityModel model = case_model(k);
      const SimplexPoint p(random_point(n, rng));
      const LocalGeometry g(chain, model, p);
      const VertexField phi = scale_potential(g, random_potential(n, rng), 0.25);
      const GeodesicRecord rec = geodesic_ivp(chain, model, p, phi, 1.0, 1e-3);
      const auto [lo, hi] = std::minmax_element(rec.speed.begin(), rec.speed.end());
      drift = std::max(drift, (*hi - *lo) / std::max(1.0, rec.speed.front()));
    }
    double residual = 0.0, reshoot = 0.0;
    std::uniform_real_distribution<double> z(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      const int n = 3 + k % 3;
      const ReversibleChain chain = random_chain(n, rng);
      const MobilityModel model = case_model(k);
      const VertexField p0 = random_point(n, rng);
      VertexField w(n);
      for (int i = 0; i < n; ++i) w(i) = z(rng);
      const VertexField step = 0.1 * (p0.cwiseProduct(w) - p0 * p0.dot(w));
      const SimplexPoint a(p0), b(p0 + step);
      BvpOptions bo;
      bo.seed = opts.seed + k;
      const BvpResult res = geodesic_bvp(chain, model, a, b, bo);
      residual = std::max(residual, res.residual);
      const GeodesicRecord shot = geodesic_ivp(chain, model, a, res.phi0, 1.0, 1.0 / bo.steps, {kBoundaryEps, false});
      reshoot = std::max(reshoot, inf_norm(shot.gamma.back() - b.p()));
    }
    r.passed = drift < 1e-8 && residual < 1e-7 && reshoot < 1e-7;
    r.detail = "speed drift " + sci(drift) + " (tol 1e-8), boundary residual " + sci(residual) +
               ", re-shot endpoint " + sci(reshoot) + " (tol 1e-7)";
  });
}

CriterionResult check_curvature_routes(const SuiteOptions& opts) {
  return timed(6, "curvature routes agree", 60.0, [&](CriterionResult& r) {
    Rng rng = rng_for(opts, 6);
    double te = 0.0, to = 0.0, eo = 0.0, sym = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 3 + k % 3;
      const ReversibleChain chain = random_chain(n, rng);
      const MobilityModel model = case_model(k);
      const SimplexPoint p(random_point(n, rng));
      const LocalGeometry g(chain, model, p);
      const FrameTensor T = frame_riemann(g, Route::Tensor);
      const FrameTensor E = frame_riemann(g, Route::Explicit);
      const FrameTensor C =
          chart_on_frame(chart_curvature_oracle(chain, model, p), orthonormal_frame(g.onsager()));
      te = std::max(te, relative_deviation(T, E));
      to = std::max(to, relative_deviation(T, C));
      eo = std::max(eo, relative_deviation(E, C));
      sym = std::max(sym, symmetry_residuals(T).max());
    }
    r.passed = te < 1e-5 && to < 1e-5 && eo < 1e-5 && sym < 1e-9;
    r.detail = "tensor/explicit " + sci(te) + ", tensor/chart " + sci(to) + ", explicit/chart " +
               sci(eo) + " (tol 1e-5), symmetries " + sci(sym) + " (tol 1e-9)";
  });
}

CriterionResult check_lattice_closed_forms(const SuiteOptions&) {
  return timed(7, "three-state lattice closed forms", 10.0, [&](CriterionResult& r) {
    const ReversibleChain chain = preset_chain("lattice3");
    const MobilityModel model = MobilityModel::geometric(1.0, 9.0, Convention::LatticeScaled);
    const SimplexPoint u = SimplexPoint::uniform(3);
    const Lattice3Forms f = lattice3_closed_forms(chain, model, u);
    const Lattice3General gen = lattice3_general(LocalGeometry(chain, model, u));
    double value_err = 0.0;
    for (double x : {f.K12, gen.K12, *f.K12_example, gen.R11, *f.R11_example, gen.R22, *f.R22_example})
      value_err = std::max(value_err, std::abs(x + 13.5));
    for (double x : {gen.S, *f.S_example}) value_err = std::max(value_err, std::abs(x + 27.0));

    double ident = 0.0;
    const int R = 20;
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < R; ++j) {
        const SimplexPoint p(sweep_grid_point(R, i, j));
        const LocalGeometry g(chain, model, p);
        const Lattice3General q = lattice3_general(g);
        const double t1 = g.theta()(0, 1), t2 = g.theta()(1, 2);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };
        ident = std::max({ident, rel(q.R11, q.K12 * t2), rel(q.R22, q.K12 * t1), rel(q.S, 2 * q.K12 * t1 * t2)});
      }
    r.passed = value_err < 1e-6 && ident < 1e-9;
    r.detail = "uniform-point error " + sci(value_err) + " (tol 1e-6), identity residual " + sci(ident) +
               " on 20x20 grid (tol 1e-9)";
  });
}

CriterionResult check_sign_laws(const SuiteOptions&) {
  return timed(8, "sign of lattice sectional curvature", 120.0, [&](CriterionResult& r) {
    const ReversibleChain chain = preset_chain("lattice3");
    struct Case {
      const char* label;
      MobilityModel model;
    };
    const std::vector<Case> cases = {{"beta=0.5", MobilityModel::geometric(0.5)},
                                     {"beta=1", MobilityModel::geometric(1.0)},
                                     {"beta=2", MobilityModel::geometric(2.0)},
                                     {"log-mean", MobilityModel::kl()}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
      const auto rows = run_sweep(chain, c.model, 50);
      int nonneg = 0, failed = 0;
      double kmax = -INFINITY, oracle = 0.0;
      for (const auto& row : rows) {
        if (row.status.rfind("error:", 0) == 0) {
          ++failed;
          continue;
        }
        if (!(row.K12 < 0.0)) ++nonneg;
        kmax = std::max(kmax, row.K12);
        oracle = std::max(oracle, row.oracle_residual);
      }
      ok = ok && nonneg == 0 && failed == 0 && oracle < 1e-5;
      detail += std::string(detail.empty() ? "" : "; ") + c.label + ": max K12 " + sci(kmax) + ", " +
                std::to_string(nonneg) + " nonnegative, " + std::to_string(failed) + " failed, chart oracle " + sci(oracle);
    }
    r.passed = ok;
    r.detail = detail;
  });
}

CriterionResult check_hessian(const SuiteOptions& opts) {
  return timed(9, "Hessian against second difference along geodesics", 30.0, [&](CriterionResult& r) {
    Rng rng = rng_for(opts, 9);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const int n = 3 + k % 3;
      const ReversibleChain chain = random_chain(n, rng);
      const MobilityModel model = case_model(k);
      const MobilityModel energy_model = model.has_f() ? model : MobilityModel::kl();
      const Energy F = f_divergence_energy(energy_model, chain);
      const SimplexPoint p(random_point(n, rng));
      const LocalGeometry g(chain, model, p);
      const VertexField phi = scale_potential(g, random_potential(n, rng), 1.0);
      const double h = 1e-3;
      const OdeOptions endpoints{kBoundaryEps, false};
      const VertexField fwd = geodesic_ivp(chain, model, p, phi, h, h / 4, endpoints).gamma.back();
      const VertexField bwd = geodesic_ivp(chain, model, p, -phi, h, h / 4, endpoints).gamma.back();
      const double second = (F.value(fwd) - 2.0 * F.value(p.p()) + F.value(bwd)) / (h * h);
      const double hess = hessian_form(g, F, phi, phi);
      worst = std::max(worst, std::abs(second - hess) / std::max(std::abs(hess), 1e-300));
    }
    r.passed = worst < 1e-4;
    r.detail = "max relative gap " + sci(worst) + " over 50 cases (tol 1e-4)";
  });
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opts,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  using Check = CriterionResult (*)(const SuiteOptions&);
  const Check checks[] = {check_gradient_flow,    check_dissipation,          check_connection,
                          check_transport,        check_geodesics,            check_curvature_routes,
                          check_lattice_closed_forms, check_sign_laws,        check_hessian};
  std::vector<CriterionResult> out;
  for (Check c : checks) {
    out.push_back(c(opts));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " (%.2f s / %.0f s)", r.seconds, r.budget_seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " +
         r.detail + buf;
}

int report_results(const std::vector<CriterionResult>& results, std::ostream& out, std::ostream& err) {
  std::vector<const CriterionResult*> failed;
  for (const auto& r : results) {
    out << format_result(r) << '\n';
    if (!r.passed) failed.push_back(&r);
  }
  out.flush();
  if (failed.empty()) return 0;
  err << "validation failed:";
  for (const auto* r : failed) err << " criterion " << r->id << " (" << r->name << ")";
  err << '\n';
  return 3;
}

}  // namespace onsager::cli
