#include <gtest/gtest.h>

#include "onsager/error.hpp"
#include "support.hpp"

using namespace onsager;
using namespace testsupport;

TEST(Metric, LatticeOnsagerMatrix) {
  const ReversibleChain lat = preset_chain("lattice3");
  const OnsagerMatrix L = onsager_matrix(lat, Eigen::MatrixXd::Ones(3, 3));
  Eigen::Matrix3d expected;
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_LT(max_abs(L.L - expected), 1e-15);
  // Path-graph spectrum 0, 1, 3.
  EXPECT_NEAR(L.eigenvalues(0), 0.0, 1e-14);
  EXPECT_NEAR(L.eigenvalues(1), 1.0, 1e-14);
  EXPECT_NEAR(L.eigenvalues(2), 3.0, 1e-14);
}

TEST(Metric, KernelAndPseudoInverseAxioms) {
  Rng rng(21);
  for (int k = 0; k < 60; ++k) {
    const int n = 2 + k % 6;
    const ReversibleChain c = random_reversible(n, rng);
    const LocalGeometry g(c, model_case(k), SimplexPoint(random_interior(n, rng)));
    const Eigen::MatrixXd& L = g.L();
    const Eigen::MatrixXd& R = g.R();
    EXPECT_LT((L * VertexField::Ones(n)).cwiseAbs().maxCoeff(), 1e-13 * max_abs(L));
    EXPECT_NEAR(g.onsager().eigenvalues(0), 0.0, 1e-12 * g.onsager().eigenvalues(n - 1));
    EXPECT_GT(g.onsager().eigenvalues(1), 0.0);
    const double s = max_abs(L), r = max_abs(R);
    EXPECT_LT(max_abs(L * R * L - L), 1e-10 * s);
    EXPECT_LT(max_abs(R * L * R - R), 1e-10 * r);
    EXPECT_LT(max_abs((L * R).transpose() - L * R), 1e-10);
    // R L is the projector onto mean-zero vectors.
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    EXPECT_LT(max_abs(R * L - P), 1e-10);
    const VertexField phi = random_mean_zero(n, rng);
    EXPECT_LT((R * (L * phi) - phi).cwiseAbs().maxCoeff(), 1e-10 * (1 + phi.cwiseAbs().maxCoeff()));
  }
}

TEST(Metric, MatrixAndEdgeInnerProductsAgree) {
  Rng rng(22);
  for (int k = 0; k < 60; ++k) {
    const int n = 2 + k % 6;
    const ReversibleChain c = random_reversible(n, rng);
    const LocalGeometry g(c, model_case(k), SimplexPoint(random_interior(n, rng)));
    const VertexField a = random_mean_zero(n, rng), b = random_mean_zero(n, rng);
    const double m = inner_product(g, a, b);
    EXPECT_NEAR(m, inner_product_edges(g, a, b), 1e-12 * (1 + std::abs(m)));
    EXPECT_NEAR(m, inner_product(g, b, a), 1e-12 * (1 + std::abs(m)));
    EXPECT_GT(inner_product(g, a, a), 0.0);
    // Gauge: shifting a potential by a constant changes nothing.
    EXPECT_NEAR(inner_product(g, VertexField(a.array() + 3.0), b), m, 1e-12 * (1 + std::abs(m)));
    const TangentPotential t(VertexField(a.array() + 2.0), g.L());
    EXPECT_NEAR(t.phi().sum(), 0.0, 1e-13);
    EXPECT_NEAR(t.velocity().sum(), 0.0, 1e-13);
  }
}

TEST(Metric, FrameOrthonormalAndComplete) {
  Rng rng(23);
  for (int k = 0; k < 40; ++k) {
    const int n = 3 + k % 5;
    const ReversibleChain c = random_reversible(n, rng);
    const LocalGeometry g(c, model_case(k), SimplexPoint(random_interior(n, rng)));
    const Frame f = orthonormal_frame(g.onsager());
    ASSERT_EQ(static_cast<int>(f.vectors.size()), n - 1);
    for (int a = 0; a < n - 1; ++a) {
      EXPECT_LT((g.L() * f.potentials[a] - f.vectors[a]).cwiseAbs().maxCoeff(), 1e-12);
      for (int b = 0; b < n - 1; ++b)
        EXPECT_NEAR(inner_product(g, f.potentials[a], f.potentials[b]), a == b ? 1.0 : 0.0, 1e-10);
    }
    // Reconstruct a tangent vector from its frame coefficients <V, e_a>.
    const VertexField phi = random_mean_zero(n, rng);
    const VertexField v = g.velocity(phi);
    VertexField rebuilt = VertexField::Zero(n);
    for (int a = 0; a < n - 1; ++a) rebuilt += inner_product(g, phi, f.potentials[a]) * f.vectors[a];
    EXPECT_LT((rebuilt - v).cwiseAbs().maxCoeff(), 1e-10 * (1 + v.cwiseAbs().maxCoeff()));
  }
}

TEST(Metric, NearSingularOnTwoKernelDirections) {
  const ReversibleChain lat = preset_chain("lattice3");
  Eigen::MatrixXd th = Eigen::MatrixXd::Ones(3, 3);
  th(1, 2) = th(2, 1) = 0.0;
  try {
    pseudo_inverse(onsager_matrix(lat, th));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NearSingular);
  }
}

TEST(Metric, ArcLengthOfConstantCurveAndGeodesic) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  const MobilityModel m = MobilityModel::kl();
  const SimplexPoint p0(lattice_point(0.4, 0.35, 0.25));
  EXPECT_NEAR(arc_length(c, m, {0.0, 0.5, 1.0}, {p0.p(), p0.p(), p0.p()}), 0.0, 1e-15);

  VertexField phi0(3);
  phi0 << 0.2, -0.05, -0.15;
  const GeodesicRecord g = geodesic_ivp(c, m, p0, phi0, 1.0, 1e-3);
  const double expected = g.speed.front() * 1.0;
  EXPECT_NEAR(arc_length(c, m, g.times, g.gamma), expected, 1e-6 * expected);
  // Trapezoid branch on a non-uniform subsample.
  std::vector<double> t;
  std::vector<VertexField> s;
  for (size_t k = 0; k < g.times.size(); k += (k < 500 ? 5 : 10)) {
    t.push_back(g.times[k]);
    s.push_back(g.gamma[k]);
  }
  EXPECT_NEAR(arc_length(c, m, t, s), g.speed.front() * t.back(), 1e-3 * expected);
}

TEST(Metric, DistanceSymmetryAndTriangleInequality) {
  const ReversibleChain c = preset_chain("triangle-reaction");
  const MobilityModel m = MobilityModel::kl();
  const SimplexPoint a(lattice_point(0.5, 0.3, 0.2)), b(lattice_point(0.35, 0.4, 0.25)),
      d(lattice_point(0.3, 0.3, 0.4));
  const double ab = distance(c, m, a, b), ba = distance(c, m, b, a);
  const double bd = distance(c, m, b, d), ad = distance(c, m, a, d);
  EXPECT_GT(ab, 0.0);
  EXPECT_NEAR(ab, ba, 1e-6 * ab);
  EXPECT_LE(ad, ab + bd + 1e-7);
  EXPECT_LE(ab, ad + bd + 1e-7);
  EXPECT_NEAR(distance(c, m, a, a), 0.0, 1e-12);
}
