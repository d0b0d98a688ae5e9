#include "onsager/lattice3.hpp"

#include <cmath>

#include "onsager/error.hpp"

namespace onsager {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kEqualTol = 1e-9;

void require_lattice(const ReversibleChain& chain) {
  if (!is_unit_lattice3(chain))
    raise(ErrorKind::InvalidArgument, "closed forms need the unit three-state path lattice");
}

bool equal_scales(const MobilityModel& model, const ReversibleChain& chain, double* s) {
  const double s0 = model.scale(chain, 0);
  *s = s0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(model.scale(chain, i) - s0) > kUnitTol * std::abs(s0)) return false;
  return true;
}

// theta_ij = c (p_i p_j)^beta with the scale folded into c.
double geometric_c(const MobilityModel& model, double s) {
  return model.c() * std::pow(s, 2.0 * model.beta());
}

bool near_equal(double a, double b) { return std::abs(a - b) <= kEqualTol * std::max(a, b); }

double kl_example(double c, double p1, double p2, double p3, double t1, double t2) {
  const double a = 1.0 / (2 * (p1 - p2) * (p1 - p2)) *
                   (3 / (2 * t1) + 1 / c * (p1 / p2 - 2) / p2 - t1 / (2 * c * c * p2 * p2));
  const double b = 1.0 / (2 * (p2 - p3) * (p2 - p3)) *
                   (3 / (2 * t2) + 1 / c * (p3 / p2 - 2) / p2 - t2 / (2 * c * c * p2 * p2));
  const double q = 1.0 / (4 * (p2 - p1) * (p2 - p3));
  const double x = q * (2 - 1 / c * (1 / p2 + 1 / p3) * t2) * (1 / (c * p2) - 1 / t1);
  const double y = q * (2 - 1 / c * (1 / p1 + 1 / p2) * t1) * (1 / (c * p2) - 1 / t2);
  return -(a + b + x + y);
}

double alpha_example(double al, double c, double p1, double p2, double p3, double t1, double t2) {
  auto e = [&](double x) { return std::pow(c * x, (al - 3) / 2); };
  auto e5 = [&](double x) { return std::pow(c * x, (al - 5) / 2); };
  const double sq = std::pow(c * p2, al - 3);
  const double a = 1.0 / (2 * (p1 - p2) * (p1 - p2)) *
                   (3 / (2 * t1) - 0.5 * sq * t1 - (e(p2) - c * (al - 3) / 2 * e5(p2) * (p2 - p1)));
  const double b = 1.0 / (2 * (p2 - p3) * (p2 - p3)) *
                   (3 / (2 * t2) - 0.5 * sq * t2 - (e(p2) - c * (al - 3) / 2 * e5(p2) * (p2 - p3)));
  const double q = 1.0 / (4 * (p2 - p1) * (p2 - p3));
  const double x = q * (2 - (e(p2) + e(p3)) * t2) * (e(p2) - 1 / t1);
  const double y = q * (2 - (e(p1) + e(p2)) * t1) * (e(p2) - 1 / t2);
  return -(a + b + x + y);
}

double f_mean_form(const MobilityModel& model, double c, double p1, double p2, double p3, double t1,
                   double t2) {
  auto f2 = [&](double x) { return model.f(c * x, 2); };
  const double g2 = f2(p2);
  const double g3 = model.f(c * p2, 3);
  const double a = 1.0 / (2 * (p1 - p2) * (p1 - p2)) *
                   (3 / (2 * t1) - 0.5 * g2 * g2 * t1 - (g2 - c * g3 * (p2 - p1)));
  const double b = 1.0 / (2 * (p2 - p3) * (p2 - p3)) *
                   (3 / (2 * t2) - 0.5 * g2 * g2 * t2 - (g2 - c * g3 * (p2 - p3)));
  const double q = 1.0 / (4 * (p2 - p1) * (p2 - p3));
  const double x = q * (2 - (g2 + f2(p3)) * t2) * (g2 - 1 / t1);
  const double y = q * (2 - (f2(p1) + g2) * t1) * (g2 - 1 / t2);
  return -(a + b + x + y);
}

struct GeometricForms {
  double K, R11, R22, S;
};

GeometricForms geometric_example(double beta, double c, double p1, double p2, double p3, double t1,
                                 double t2) {
  const double u1 = beta / (p2 * p2) + beta * beta / (2 * p1 * p2);
  const double u3 = beta / (p2 * p2) + beta * beta / (2 * p2 * p3);
  GeometricForms g;
  g.K = -0.5 * (u1 / t2 + u3 / t1);
  g.R11 = -0.5 * (u1 + std::pow(p3 / p1, beta) * u3);
  g.R22 = -0.5 * (u3 + std::pow(p1 / p3, beta) * u1);
  g.S = -c * beta *
        (std::pow(p1, beta) * std::pow(p2, beta - 2) + std::pow(p2, beta - 2) * std::pow(p3, beta) +
         beta / 2 *
             (std::pow(p1, beta - 1) * std::pow(p2, beta - 1) +
              std::pow(p2, beta - 1) * std::pow(p3, beta - 1)));
  return g;
}

}  // namespace

bool is_unit_lattice3(const ReversibleChain& chain) {
  if (chain.n() != 3) return false;
  const auto& w = chain.omega();
  return std::abs(w(0, 1) - 1.0) <= kUnitTol && std::abs(w(1, 2) - 1.0) <= kUnitTol &&
         w(0, 2) == 0.0;
}

CdfLogPartials cdf_log_partials(const LocalGeometry& g) {
  const auto& J = g.jet();
  const double t1 = J.theta(0, 1), t2 = J.theta(1, 2);
  const double d1t1 = J.d1(0, 1) - J.d1(1, 0);
  const double d2t1 = J.d1(1, 0);
  const double d22t1 = J.d11(1, 0);
  const double d1t2 = -J.d1(1, 2);
  const double d11t2 = J.d11(1, 2);
  const double d2t2 = J.d1(1, 2) - J.d1(2, 1);
  CdfLogPartials d;
  d.d1_log_t1 = d1t1 / t1;
  d.d2_log_t1 = d2t1 / t1;
  d.d22_log_t1 = d22t1 / t1 - d.d2_log_t1 * d.d2_log_t1;
  d.d1_log_t2 = d1t2 / t2;
  d.d2_log_t2 = d2t2 / t2;
  d.d11_log_t2 = d11t2 / t2 - d.d1_log_t2 * d.d1_log_t2;
  return d;
}

CdfLogPartials cdf_log_partials_table(const MobilityModel& model, const ReversibleChain& chain,
                                      const SimplexPoint& pt) {
  require_lattice(chain);
  double s = 0.0;
  if (!equal_scales(model, chain, &s))
    raise(ErrorKind::InvalidArgument, "tabulated partials need equal ratio scales");
  const double p1 = pt(0), p2 = pt(1), p3 = pt(2);
  CdfLogPartials d;
  if (model.kind() == MobilityKind::GeometricMean) {
    const double b = model.beta();
    d.d1_log_t1 = b * (1 / p1 - 1 / p2);
    d.d1_log_t2 = -b / p2;
    d.d2_log_t1 = b / p2;
    d.d2_log_t2 = b * (1 / p2 - 1 / p3);
    d.d22_log_t1 = -b / (p2 * p2);
    d.d11_log_t2 = -b / (p2 * p2);
    return d;
  }
  if (model.kind() == MobilityKind::Custom)
    raise(ErrorKind::InvalidArgument, "tabulated partials need f''' (built-in families only)");
  if (near_equal(p1, p2) || near_equal(p2, p3))
    raise(ErrorKind::EqualComponents, "tabulated partials are singular at p1 = p2 or p2 = p3");
  const double c = s;
  auto F1 = [&](double x) { return model.f(c * x, 1); };
  auto F2 = [&](double x) { return model.f(c * x, 2); };
  const double F3p2 = model.f(c * p2, 3);
  const double D1 = F1(p1) - F1(p2);
  const double D2 = F1(p2) - F1(p3);
  d.d1_log_t2 = -1 / (p2 - p3) + c * F2(p2) / D2;
  d.d11_log_t2 = -1 / ((p2 - p3) * (p2 - p3)) + c * c * F2(p2) * F2(p2) / (D2 * D2) -
                 c * c * F3p2 / D2;
  d.d1_log_t1 = 2 / (p1 - p2) - c * (F2(p1) + F2(p2)) / D1;
  d.d2_log_t1 = -1 / (p1 - p2) + c * F2(p2) / D1;
  d.d22_log_t1 = -1 / ((p1 - p2) * (p1 - p2)) + c * c * F3p2 / D1 +
                 c * c * F2(p2) * F2(p2) / (D1 * D1);
  d.d2_log_t2 = 2 / (p2 - p3) - c * (F2(p2) + F2(p3)) / D2;
  return d;
}

double k12_from_partials(double t1, double t2, const CdfLogPartials& d) {
  return (0.5 * d.d11_log_t2 + 0.25 * (d.d1_log_t1 - d.d1_log_t2) * d.d1_log_t2) / t2 +
         (0.5 * d.d22_log_t1 + 0.25 * (d.d2_log_t2 - d.d2_log_t1) * d.d2_log_t1) / t1;
}

double lattice3_example_k12(const ReversibleChain& chain, const MobilityModel& model,
                            const SimplexPoint& pt, std::string* label) {
  require_lattice(chain);
  double s = 0.0;
  if (!equal_scales(model, chain, &s))
    raise(ErrorKind::InvalidArgument, "closed forms need equal ratio scales");
  const double p1 = pt(0), p2 = pt(1), p3 = pt(2);
  const auto& m = model;
  const double sa = s;
  const double t1 = m.edge_value(p1, p2, sa, sa);
  const double t2 = m.edge_value(p2, p3, sa, sa);
  switch (m.kind()) {
    case MobilityKind::GeometricMean:
      if (label) *label = "geometric";
      return geometric_example(m.beta(), geometric_c(m, s), p1, p2, p3, t1, t2).K;
    case MobilityKind::Custom:
      raise(ErrorKind::InvalidArgument, "no closed form for a custom f");
    default:
      break;
  }
  if (near_equal(p1, p2) || near_equal(p2, p3))
    raise(ErrorKind::EqualComponents, "closed form is singular at p1 = p2 or p2 = p3");
  if (m.kind() == MobilityKind::KLLogMean) {
    if (label) *label = "kl";
    return kl_example(s, p1, p2, p3, t1, t2);
  }
  if (label) *label = "alpha";
  return alpha_example(m.alpha_param(), s, p1, p2, p3, t1, t2);
}

Lattice3Forms lattice3_closed_forms(const ReversibleChain& chain, const MobilityModel& model,
                                    const SimplexPoint& pt) {
  require_lattice(chain);
  const LocalGeometry g(chain, model, pt);
  Lattice3Forms out;
  out.theta1 = g.theta()(0, 1);
  out.theta2 = g.theta()(1, 2);
  out.K12 = k12_from_partials(out.theta1, out.theta2, cdf_log_partials(g));
  out.R11 = out.K12 * out.theta2;
  out.R22 = out.K12 * out.theta1;
  out.S = 2.0 * out.K12 * out.theta1 * out.theta2;

  double s = 0.0;
  if (!equal_scales(model, chain, &s) || model.kind() == MobilityKind::Custom) return out;
  const double p1 = pt(0), p2 = pt(1), p3 = pt(2);
  if (model.kind() == MobilityKind::GeometricMean) {
    const auto ex = geometric_example(model.beta(), geometric_c(model, s), p1, p2, p3, out.theta1,
                                      out.theta2);
    out.example = "geometric";
    out.K12_table = k12_from_partials(out.theta1, out.theta2,
                                      cdf_log_partials_table(model, chain, pt));
    out.K12_example = ex.K;
    out.R11_example = ex.R11;
    out.R22_example = ex.R22;
    out.S_example = ex.S;
    return out;
  }
  if (near_equal(p1, p2) || near_equal(p2, p3)) {
    out.singular = true;
    return out;
  }
  out.K12_table =
      k12_from_partials(out.theta1, out.theta2, cdf_log_partials_table(model, chain, pt));
  out.K12_f_mean = f_mean_form(model, s, p1, p2, p3, out.theta1, out.theta2);
  out.K12_example = lattice3_example_k12(chain, model, pt, &out.example);
  return out;
}

Lattice3General lattice3_general(const LocalGeometry& g) {
  require_lattice(g.chain());
  VertexField x1(3), x2(3);
  x1 << 1.0, -1.0, 0.0;
  x2 << 0.0, 1.0, -1.0;
  const VertexField P1 = g.R() * x1;
  const VertexField P2 = g.R() * x2;
  const Frame fr = orthonormal_frame(g.onsager());
  auto ric = [&](const VertexField& a, const VertexField& b) {
    double sum = 0.0;
    for (const auto& e : fr.potentials) sum += riemann(g, {e, a, b, e});
    return sum;
  };
  Lattice3General out;
  out.K12 = riemann(g, {P1, P2, P2, P1});
  out.R11 = ric(P1, P1);
  out.R22 = ric(P2, P2);
  out.R12 = ric(P1, P2);
  out.S = ricci_scalar(g).scalar;
  return out;
}

}  // namespace onsager
