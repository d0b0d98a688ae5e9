#include <gtest/gtest.h>

#include <algorithm>

#include "onsager/error.hpp"
#include "support.hpp"

using namespace onsager;
using namespace testsupport;

namespace {

struct Case {
  ReversibleChain chain;
  MobilityModel model;
  SimplexPoint point;
};

Case make_case(int k, Rng& rng, double floor = 0.1) {
  const int n = 3 + k % 4;
  ReversibleChain c = random_reversible(n, rng);
  return {c, model_case(k), SimplexPoint(random_interior(n, rng, floor))};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Onsager matrix at an arbitrary positive (possibly off-plane) vector.
Eigen::MatrixXd L_at(const Case& c, const VertexField& p) {
  return onsager_L(c.chain, theta_jet_unchecked(c.model, c.chain, p).theta);
}

}  // namespace

TEST(Connection, DirectionalThetaMatchesFiniteDifference) {
  Rng rng(41);
  for (int k = 0; k < 30; ++k) {
    const Case c = make_case(k, rng);
    const LocalGeometry g(c.chain, c.model, c.point);
    const VertexField phi = random_mean_zero(c.chain.n(), rng);
    const VertexField v = g.velocity(phi);
    const double h = 1e-6 / std::max(1.0, v.cwiseAbs().maxCoeff());
    const EdgeMatrix fd = (theta_jet_unchecked(c.model, c.chain, c.point.p() + h * v).theta -
                           theta_jet_unchecked(c.model, c.chain, c.point.p() - h * v).theta) /
                          (2 * h);
    const EdgeMatrix an = directional_theta(g, phi);
    EXPECT_LT(max_abs(an - fd), 1e-6 * (1 + max_abs(an)));
    EXPECT_LT(max_abs(an - an.transpose()), 1e-14 * (1 + max_abs(an)));
    EXPECT_LT(max_abs(an - directional_theta_along(g, v)), 1e-15);
  }
}

TEST(Connection, DirectionalDerivativeOfMetricIsGammaPairing) {
  // phi1^T L(V3 theta) phi2 = phi3^T L Gamma(phi1, phi2)
  Rng rng(42);
  for (int k = 0; k < 60; ++k) {
    const Case c = make_case(k, rng);
    const LocalGeometry g(c.chain, c.model, c.point);
    const int n = c.chain.n();
    const VertexField a = random_mean_zero(n, rng), b = random_mean_zero(n, rng), d = random_mean_zero(n, rng);
    const double lhs = a.dot(g.L_of(directional_theta(g, d)) * b);
    const double rhs = d.dot(g.L() * gamma_op(g, a, b));
    EXPECT_LT(rel(lhs, rhs), 1e-12);
  }
}

TEST(Connection, CommutatorIsLieBracket) {
  Rng rng(43);
  for (int k = 0; k < 30; ++k) {
    const Case c = make_case(k, rng);
    const LocalGeometry g(c.chain, c.model, c.point);
    const int n = c.chain.n();
    const VertexField a = random_mean_zero(n, rng), b = random_mean_zero(n, rng);
    const VertexField va = g.velocity(a), vb = g.velocity(b);
    const double h = 1e-6;
    const VertexField& p = c.point.p();
    // D V_b [V_a] - D V_a [V_b] with potentials held fixed.
    const VertexField dvb = (L_at(c, p + h * va) * b - L_at(c, p - h * va) * b) / (2 * h);
    const VertexField dva = (L_at(c, p + h * vb) * a - L_at(c, p - h * vb) * a) / (2 * h);
    const VertexField br = commutator(g, a, b);
    EXPECT_LT((br - (dvb - dva)).cwiseAbs().maxCoeff(), 1e-6 * (1 + br.cwiseAbs().maxCoeff()));
    EXPECT_LT((br + commutator(g, b, a)).cwiseAbs().maxCoeff(), 1e-14 * (1 + br.cwiseAbs().maxCoeff()));
  }
}

TEST(Connection, TorsionFreeAndCompatible) {
  Rng rng(44);
  for (int k = 0; k < 60; ++k) {
    const Case c = make_case(k, rng);
    const LocalGeometry g(c.chain, c.model, c.point);
    const int n = c.chain.n();
    const VertexField a = random_mean_zero(n, rng), b = random_mean_zero(n, rng), d = random_mean_zero(n, rng);
    const VertexField ab = levi_civita(g, a, b).vector, ba = levi_civita(g, b, a).vector;
    const VertexField br = commutator(g, a, b);
    EXPECT_LT((ab - ba - br).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, br.cwiseAbs().maxCoeff()));
    // Symmetric part is L Gamma.
    EXPECT_LT((ab + ba - g.L() * gamma_op(g, a, b)).cwiseAbs().maxCoeff(),
              1e-10 * std::max(1.0, ab.cwiseAbs().maxCoeff()));
    EXPECT_NEAR(ab.sum(), 0.0, 1e-12 * (1 + ab.cwiseAbs().maxCoeff()));

    // V_a <V_b, V_d> = <nabla_a V_b, V_d> + <V_b, nabla_a V_d>, derivative by central difference.
    const double h = 1e-6;
    const VertexField va = g.velocity(a);
    const double fd = (b.dot(L_at(c, c.point.p() + h * va) * d) - b.dot(L_at(c, c.point.p() - h * va) * d)) / (2 * h);
    const double an = d.dot(ab) + b.dot(levi_civita(g, a, d).vector);
    EXPECT_LT(rel(an, fd), 1e-5);
  }
}

TEST(Connection, ScalarFormsAgree) {
  Rng rng(45);
  for (int k = 0; k < 60; ++k) {
    const Case c = make_case(k, rng);
    const LocalGeometry g(c.chain, c.model, c.point);
    const int n = c.chain.n();
    const VertexField a = random_mean_zero(n, rng), b = random_mean_zero(n, rng), d = random_mean_zero(n, rng);
    const ConnectionValue v = levi_civita(g, a, b, d);
    ASSERT_TRUE(v.scalar_form.has_value());
    EXPECT_LT(rel(*v.scalar_form, levi_civita_scalar_gamma(g, a, b, d)), 1e-12);
    const VertexField pot = levi_civita_potential(g, a, b);
    EXPECT_NEAR(pot.sum(), 0.0, 1e-12);
    EXPECT_LT((g.L() * pot - v.vector).cwiseAbs().maxCoeff(), 1e-10 * (1 + v.vector.cwiseAbs().maxCoeff()));
  }
}

TEST(Connection, TriangleReactionSpecialization) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  const MobilityModel m = MobilityModel::kl();
  const LocalGeometry g(c, m, SimplexPoint(lattice_point(0.45, 0.35, 0.2)));
  VertexField a(3), b(3), d(3);
  a << 1, 0, -1;
  b << 0, 1, -1;
  d << 1, -2, 1;
  EXPECT_LT(rel(*levi_civita(g, a, b, d).scalar_form, levi_civita_scalar_gamma(g, a, b, d)), 1e-12);
}

TEST(Connection, ConstantMobilityIsFlat) {
  Rng rng(46);
  const ReversibleChain c = random_reversible(5, rng);
  const MobilityModel m = constant_mobility();
  const LocalGeometry g(c, m, SimplexPoint(random_interior(5, rng)));
  const VertexField a = random_mean_zero(5, rng), b = random_mean_zero(5, rng);
  EXPECT_LT(max_abs(directional_theta(g, a)), 1e-12);
  EXPECT_LT(levi_civita(g, a, b).vector.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(gamma_op(g, a, b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(gamma_op(g, VertexField::Ones(5), b).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Connection, GeodesicConservesSpeedAndReverses) {
  Rng rng(47);
  for (int k = 0; k < 6; ++k) {
    const Case c = make_case(k, rng, 0.3);
    const LocalGeometry g(c.chain, c.model, c.point);
    const int n = c.chain.n();
    VertexField phi = random_mean_zero(n, rng);
    const double ratio = (g.velocity(phi).array().abs() / c.point.p().array()).maxCoeff();
    phi *= 0.3 / ratio;
    const GeodesicRecord fwd = geodesic_ivp(c.chain, c.model, c.point, phi, 1.0, 1e-3);
    const auto [lo, hi] = std::minmax_element(fwd.speed.begin(), fwd.speed.end());
    EXPECT_LT(*hi - *lo, 1e-8 * (*hi));
    for (const VertexField& q : fwd.phi) EXPECT_NEAR(q.sum(), 0.0, 1e-12);
    const GeodesicRecord back =
        geodesic_ivp(c.chain, c.model, SimplexPoint(fwd.gamma.back()), -fwd.phi.back(), 1.0, 1e-3);
    EXPECT_LT((back.gamma.back() - c.point.p()).cwiseAbs().maxCoeff(), 1e-10);
  }
  const Case c = make_case(0, rng);
  const GeodesicRecord rest = geodesic_ivp(c.chain, c.model, c.point, VertexField::Zero(c.chain.n()), 0.5, 0.1);
  for (const VertexField& q : rest.gamma) EXPECT_EQ((q - c.point.p()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Connection, VelocityTransportsToVelocity) {
  Rng rng(48);
  for (int k = 0; k < 5; ++k) {
    const Case c = make_case(k, rng, 0.3);
    const LocalGeometry g(c.chain, c.model, c.point);
    VertexField phi = random_mean_zero(c.chain.n(), rng);
    phi *= 0.3 / (g.velocity(phi).array().abs() / c.point.p().array()).maxCoeff();
    const GeodesicPath path{c.point.p(), phi, 1.0, 1e-3};
    const std::vector<TransportState> tr = parallel_transport(c.chain, c.model, path, {phi});
    for (const TransportState& s : tr) EXPECT_LT((s.eta[0] - s.phi).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Connection, TransportIsIsometryOnSampledCurve) {
  Rng rng(49);
  const Case c = make_case(1, rng, 0.3);
  const int n = c.chain.n();
  // Straight chord sampled on a uniform grid (not a geodesic).
  const VertexField q = random_interior(n, rng, 0.3);
  SampledCurve curve;
  const int m = 2001;
  for (int k = 0; k < m; ++k) {
    const double t = static_cast<double>(k) / (m - 1);
    curve.times.push_back(t);
    curve.samples.push_back((1 - t) * c.point.p() + t * q);
  }
  const VertexField e1 = random_mean_zero(n, rng), e2 = random_mean_zero(n, rng);
  const std::vector<TransportState> tr = parallel_transport(c.chain, c.model, curve, {e1, e2});
  auto gram = [&](const TransportState& s) {
    const LocalGeometry g(c.chain, c.model, SimplexPoint(s.gamma / s.gamma.sum()));
    Eigen::Matrix2d G;
    G(0, 0) = inner_product(g, s.eta[0], s.eta[0]);
    G(1, 1) = inner_product(g, s.eta[1], s.eta[1]);
    G(0, 1) = G(1, 0) = inner_product(g, s.eta[0], s.eta[1]);
    return G;
  };
  const Eigen::Matrix2d G0 = gram(tr.front());
  EXPECT_LT(max_abs(gram(tr.back()) - G0), 1e-7 * max_abs(G0));
  EXPECT_LT((tr.back().gamma - q).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Connection, BoundaryValueGeodesic) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  const MobilityModel m = MobilityModel::alpha(0.5);
  const SimplexPoint p0(lattice_point(0.5, 0.3, 0.2)), p1(lattice_point(0.3, 0.3, 0.4));
  const BvpResult r = geodesic_bvp(c, m, p0, p1);
  EXPECT_LT(r.residual, 1e-7);
  EXPECT_LT((r.path.gamma.back() - p1.p()).cwiseAbs().maxCoeff(), 1e-7);
  // The chord is an admissible curve, so it cannot be shorter than the geodesic.
  std::vector<double> t;
  std::vector<VertexField> s;
  for (int k = 0; k <= 400; ++k) {
    t.push_back(k / 400.0);
    s.push_back((1 - t.back()) * p0.p() + t.back() * p1.p());
  }
  EXPECT_LE(r.length, arc_length(c, m, t, s) + 1e-9);
  const BvpResult same = geodesic_bvp(c, m, p0, p0);
  EXPECT_EQ(same.phi0.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(same.length, 0.0);
}

TEST(Connection, BoundaryValueFailureIsReported) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  BvpOptions opts;
  opts.max_iterations = 1;
  opts.restarts = 0;
  opts.tolerance = 1e-30;
  try {
    geodesic_bvp(c, MobilityModel::kl(), SimplexPoint(lattice_point(0.6, 0.3, 0.1)),
                 SimplexPoint(lattice_point(0.1, 0.3, 0.6)), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BvpNoConvergence);
  }
}

TEST(Connection, HessianSymmetricAndRoutesAgree) {
  Rng rng(50);
  for (int k = 0; k < 40; ++k) {
    const int n = 3 + k % 4;
    const ReversibleChain c = random_reversible(n, rng);
    const MobilityModel m = k % 2 ? MobilityModel::kl() : MobilityModel::alpha(-1.0);
    const LocalGeometry g(c, m, SimplexPoint(random_interior(n, rng)));
    const Energy F = f_divergence_energy(m, c);
    const VertexField a = random_mean_zero(n, rng), b = random_mean_zero(n, rng);
    const double ab = hessian_form(g, F, a, b);
    EXPECT_LT(rel(ab, hessian_form(g, F, b, a)), 1e-10);
    EXPECT_LT(rel(ab, hessian_form_explicit(g, F, a, b)), 1e-10);
    Energy constant{[](const VertexField&) { return 1.0; },
                    [](const VertexField& p) { return VertexField::Zero(p.size()); }, {}};
    EXPECT_EQ(hessian_form(g, constant, a, b), 0.0);
  }
}

TEST(Connection, HessianIsSecondDerivativeAlongGeodesic) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  const MobilityModel m = MobilityModel::kl();
  const SimplexPoint p(lattice_point(0.4, 0.35, 0.25));
  const LocalGeometry g(c, m, p);
  const Energy F = f_divergence_energy(m, c);
  VertexField phi(3);
  phi << 0.3, -0.1, -0.2;
  const double h = 1e-3;
  const double fp = F.value(geodesic_ivp(c, m, p, phi, h, h / 4).gamma.back());
  const double fm = F.value(geodesic_ivp(c, m, p, -phi, h, h / 4).gamma.back());
  const double second = (fp - 2 * F.value(p.p()) + fm) / (h * h);
  EXPECT_LT(rel(second, hessian_form(g, F, phi, phi)), 1e-4);
}
