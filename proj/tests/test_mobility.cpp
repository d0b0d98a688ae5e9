#include <gtest/gtest.h>

#include <cmath>

#include "onsager/error.hpp"
#include "support.hpp"

using namespace onsager;
using namespace testsupport;

namespace {

std::vector<MobilityModel> all_models() {
  return {MobilityModel::kl(), MobilityModel::alpha(-1.0), MobilityModel::alpha(0.5),
          MobilityModel::alpha(2.0), MobilityModel::geometric(0.5), MobilityModel::geometric(2.0)};
}

// Log-mean written out independently of the library.
double log_mean(double a, double b) { return a == b ? a : (a - b) / std::log(a / b); }

}  // namespace

TEST(Mobility, SimplexPointValidation) {
  EXPECT_NO_THROW(SimplexPoint(lattice_point(0.5, 0.3, 0.2)));
  try {
    SimplexPoint(lattice_point(0.5, 0.5, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundaryPoint);
  }
  EXPECT_THROW(SimplexPoint(lattice_point(0.5, 0.3, 0.3)), Error);
  EXPECT_NEAR(SimplexPoint::uniform(4).p().sum(), 1.0, 1e-15);
}

TEST(Mobility, KlIsOneAtEquilibrium) {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const ReversibleChain c = random_reversible(2 + k % 6, rng);
    const EdgeMatrix th = theta(MobilityModel::kl(), c, SimplexPoint(c.pi()));
    const EdgeMatrix thg = theta(MobilityModel::geometric(0.8), c, SimplexPoint(c.pi()));
    for (const Edge& e : c.edges()) {
      EXPECT_NEAR(th(e.i, e.j), 1.0, 1e-14);
      EXPECT_NEAR(thg(e.i, e.j), 1.0, 1e-14);
    }
  }
}

TEST(Mobility, KlLatticeValue) {
  const ReversibleChain lat = preset_chain("lattice3");
  const SimplexPoint p(lattice_point(0.5, 0.3, 0.2));
  const double expected = 3.0 * 0.2 / std::log(0.5 / 0.3);
  EXPECT_NEAR(expected, 1.1745691, 1e-7);
  const EdgeMatrix scaled = theta(MobilityModel::kl(Convention::LatticeScaled, 3.0), lat, p);
  const EdgeMatrix ref = theta(MobilityModel::kl(), lat, p);
  EXPECT_NEAR(scaled(0, 1), expected, 1e-14);
  EXPECT_NEAR(ref(0, 1), expected, 1e-14);
  EXPECT_NEAR(ref(1, 2), log_mean(0.9, 0.6), 1e-14);
}

TEST(Mobility, GeometricScaledMatchesReference) {
  // Uniform pi = 1/3 makes c = 3^(2 beta) in the scaled form equal the reference form.
  const ReversibleChain lat = preset_chain("lattice3");
  const SimplexPoint p(lattice_point(0.25, 0.45, 0.3));
  for (double beta : {0.5, 1.0, 2.0}) {
    const EdgeMatrix a = theta(MobilityModel::geometric(beta), lat, p);
    const EdgeMatrix b =
        theta(MobilityModel::geometric(beta, std::pow(3.0, 2 * beta), Convention::LatticeScaled), lat, p);
    EXPECT_LT(max_abs(a - b), 1e-13);
    EXPECT_NEAR(b(0, 1), std::pow(3.0, 2 * beta) * std::pow(0.25 * 0.45, beta), 1e-13);
  }
}

TEST(Mobility, SymmetryPositivityAndKlBounds) {
  Rng rng(2);
  for (const MobilityModel& m : all_models()) {
    for (int k = 0; k < 1000; ++k) {
      const int n = 2 + k % 5;
      const ReversibleChain c = random_reversible(n, rng);
      const SimplexPoint p(random_interior(n, rng, 0.01));
      const EdgeMatrix th = theta(m, c, p);
      EXPECT_LT(max_abs(th - th.transpose()), 1e-15 * (1 + max_abs(th)));
      for (const Edge& e : c.edges()) {
        ASSERT_GT(th(e.i, e.j), 0.0);
        if (m.kind() == MobilityKind::KLLogMean) {
          const double ri = p(e.i) / c.pi()(e.i), rj = p(e.j) / c.pi()(e.j);
          EXPECT_LE(th(e.i, e.j), std::max(ri, rj) * (1 + 1e-14));
          EXPECT_GE(th(e.i, e.j), std::min(ri, rj) * (1 - 1e-14));
          EXPECT_NEAR(th(e.i, e.j), log_mean(ri, rj), 1e-12 * log_mean(ri, rj));
        }
      }
    }
  }
}

TEST(Mobility, PartialsMatchFiniteDifferences) {
  Rng rng(3);
  const double h1 = 1e-6, h2 = 1e-4;
  for (const MobilityModel& m : all_models()) {
    for (int k = 0; k < 30; ++k) {
      const int n = 3 + k % 3;
      const ReversibleChain c = random_reversible(n, rng);
      const SimplexPoint p(random_interior(n, rng, 0.2));
      const Edge e = c.edges()[k % c.edges().size()];
      auto th = [&](const VertexField& q) { return theta_jet_unchecked(m, c, q).theta(e.i, e.j); };
      auto shifted = [&](int a, double da, int b, double db) {
        VertexField q = p.p();
        q(a) += da;
        q(b) += db;
        return q;
      };
      for (int a : {e.i, e.j}) {
        const double fd = (th(shifted(a, h1, a, 0)) - th(shifted(a, -h1, a, 0))) / (2 * h1);
        const double an = theta_partial(m, c, p, e.i, e.j, a);
        EXPECT_NEAR(an, fd, 1e-6 * (1 + std::abs(fd))) << m.describe();
        const double fd2 = (th(shifted(a, h2, a, 0)) - 2 * th(p.p()) + th(shifted(a, -h2, a, 0))) / (h2 * h2);
        EXPECT_NEAR(theta_second_partial(m, c, p, e.i, e.j, a, a), fd2, 1e-4 * (1 + std::abs(fd2)))
            << m.describe();
      }
      const double fdx = (th(shifted(e.i, h2, e.j, h2)) - th(shifted(e.i, h2, e.j, -h2)) -
                          th(shifted(e.i, -h2, e.j, h2)) + th(shifted(e.i, -h2, e.j, -h2))) /
                         (4 * h2 * h2);
      EXPECT_NEAR(theta_second_partial(m, c, p, e.i, e.j, e.i, e.j), fdx, 1e-4 * (1 + std::abs(fdx)))
          << m.describe();
    }
  }
}

TEST(Mobility, UnsupportedVertexAndNonEdge) {
  const ReversibleChain lat = preset_chain("lattice3");
  const SimplexPoint p(lattice_point(0.5, 0.3, 0.2));
  try {
    theta_second_partial(MobilityModel::kl(), lat, p, 0, 1, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedVertex);
  }
  EXPECT_THROW(theta_partial(MobilityModel::kl(), lat, p, 0, 2, 0), Error);
}

TEST(Mobility, GeometricPowerRules) {
  const ReversibleChain lat = preset_chain("lattice3");
  const SimplexPoint p(lattice_point(0.2, 0.5, 0.3));
  for (double beta : {0.5, 1.0, 2.0}) {
    const MobilityModel m = MobilityModel::geometric(beta);
    const double th = theta(m, lat, p)(0, 1);
    EXPECT_NEAR(theta_partial(m, lat, p, 0, 1, 0), beta * th / 0.2, 1e-12 * th);
    EXPECT_NEAR(theta_second_partial(m, lat, p, 0, 1, 0, 0), beta * (beta - 1) * th / 0.04, 1e-11 * th);
    EXPECT_NEAR(theta_second_partial(m, lat, p, 0, 1, 0, 1), beta * beta * th / 0.1, 1e-11 * th);
  }
}

TEST(Mobility, ConstantMobilityHasZeroPartials) {
  const ReversibleChain lat = preset_chain("lattice3");
  const SimplexPoint p(lattice_point(0.2, 0.5, 0.3));
  const ThetaJet J = theta_jet(constant_mobility(), lat, p);
  for (const Edge& e : lat.edges()) EXPECT_NEAR(J.theta(e.i, e.j), 1.0, 1e-13);
  EXPECT_LT(max_abs(J.d1), 1e-12);
  EXPECT_LT(max_abs(J.d11), 1e-12);
  EXPECT_LT(max_abs(J.d12), 1e-12);
}

TEST(Mobility, EqualRatioContinuity) {
  // theta -> 1 / f''(r) as the two ratios merge.
  Eigen::MatrixXd Q(2, 2);
  Q << 0, 1, 1, 0;
  const ReversibleChain two = build_reversible_chain(Q);
  for (const MobilityModel& m : {MobilityModel::kl(), MobilityModel::alpha(-1.0), MobilityModel::alpha(0.5)}) {
    const double r = 0.8;  // p1 = 0.4
    const double limit = 1.0 / m.f(r, 2);
    double previous = 1.0;
    for (double d : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
      VertexField q(2);
      q << 0.4, 0.6;
      // Ratios r and r + 2d with pi = 1/2 need p2 = (r + 2d) / 2; normalization is irrelevant for theta.
      q(1) = 0.5 * (r + 2 * d);
      const double err = std::abs(theta_jet_unchecked(m, two, q).theta(0, 1) - limit);
      EXPECT_LE(err, previous + 1e-15);
      previous = err;
    }
    EXPECT_LT(previous, 1e-11);
  }
}

TEST(Mobility, AlphaOneRejected) {
  try {
    MobilityModel::alpha(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Mobility, KlDivergenceDirectSum) {
  const ReversibleChain lat = preset_chain("lattice3");
  const VertexField p = lattice_point(0.5, 0.3, 0.2);
  const double direct = 0.5 * std::log(1.5) + 0.3 * std::log(0.9) + 0.2 * std::log(0.6);
  EXPECT_NEAR(f_divergence(MobilityModel::kl(), lat, p), direct, 1e-15);
  EXPECT_NEAR(direct, 0.0689593, 1e-7);
  EXPECT_EQ(f_divergence(MobilityModel::kl(), lat, lat.pi()), 0.0);
}

TEST(Mobility, DivergenceGradientAndHessian) {
  Rng rng(4);
  for (const MobilityModel& m : {MobilityModel::kl(), MobilityModel::alpha(-1.0), MobilityModel::alpha(0.5)}) {
    const ReversibleChain c = random_reversible(4, rng);
    const VertexField p = random_interior(4, rng, 0.2);
    const VertexField g = f_divergence_gradient(m, c, p);
    const VertexField hd = f_divergence_hessian_diag(m, c, p);
    for (int i = 0; i < 4; ++i) {
      VertexField a = p, b = p;
      a(i) += 1e-6;
      b(i) -= 1e-6;
      EXPECT_NEAR(g(i), (f_divergence(m, c, a) - f_divergence(m, c, b)) / 2e-6, 1e-7);
      a(i) += 1e-4 - 1e-6;
      b(i) -= 1e-4 - 1e-6;
      const double fd2 = (f_divergence(m, c, a) - 2 * f_divergence(m, c, p) + f_divergence(m, c, b)) / 1e-8;
      EXPECT_NEAR(hd(i), fd2, 1e-4 * (1 + std::abs(fd2)));
    }
  }
}

TEST(Mobility, GeometricHasNoDivergence) {
  const ReversibleChain lat = preset_chain("lattice3");
  try {
    f_divergence(MobilityModel::geometric(), lat, lat.pi());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoDivergenceDefined);
  }
}

TEST(Mobility, CustomModelMatchesKl) {
  CustomF kl{[](double z) { return z * std::log(z) - z + 1; }, [](double z) { return std::log(z); },
             [](double z) { return 1.0 / z; }};
  const MobilityModel custom = MobilityModel::custom(kl);
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const ReversibleChain c = random_reversible(4, rng);
    const SimplexPoint p(random_interior(4, rng, 0.2));
    const ThetaJet a = theta_jet(custom, c, p), b = theta_jet(MobilityModel::kl(), c, p);
    EXPECT_LT(max_abs(a.theta - b.theta), 1e-10);
    EXPECT_LT(max_abs(a.d1 - b.d1), 1e-6 * (1 + max_abs(b.d1)));
  }
  CustomF concave{[](double z) { return -std::log(z) + z - 1; }, [](double z) { return 1 - 1 / z; },
                  [](double z) { return -1.0 / (z * z); }};
  const MobilityModel bad = MobilityModel::custom(concave);
  try {
    bad.edge_value(0.3, 0.5, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonconvexF);
  }
}
