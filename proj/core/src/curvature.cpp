#include "onsager/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "onsager/error.hpp"

namespace onsager {

std::string MConvention::label() const {
  std::ostringstream os;
  os << (w_sign < 0 ? "-2W" : "+2W") << " - " << nabla_weight << "(N12+N21)";
  return os.str();
}

std::array<MConvention, 4> m_candidates() {
  return {MConvention{-1.0, 1.0}, MConvention{+1.0, 1.0}, MConvention{-1.0, 2.0},
          MConvention{+1.0, 2.0}};
}

namespace {

EdgeMatrix w_matrix(const LocalGeometry& g, const VertexField& va, const VertexField& vb) {
  const ThetaJet& J = g.jet();
  const Eigen::ArrayXd prod = va.array() * vb.array();
  EdgeMatrix W = (J.d11.array().colwise() * prod).matrix() +
                 (J.d11.transpose().array().rowwise() * prod.transpose()).matrix();
  W += J.d12.cwiseProduct(va * vb.transpose() + vb * va.transpose());
  return W;
}

EdgeMatrix n_matrix(const LocalGeometry& g, const VertexField& phi_a, const VertexField& phi_b) {
  const VertexField y = g.L_of(directional_theta(g, phi_a)) * phi_b;
  return 0.5 * directional_theta_along(g, y);
}

// Pairwise building blocks of the tensor formula for a list of potentials.
struct TensorCache {
  const LocalGeometry& g;
  const std::vector<VertexField>& phi;
  MConvention conv;
  int K;
  std::vector<VertexField> vel;
  std::vector<Eigen::MatrixXd> Ldir;          // L(V_a theta)
  std::vector<Eigen::MatrixXd> Lm;            // L(m(a,b)), index a*K+b
  std::vector<VertexField> gam;               // Gamma(a,b)
  std::vector<VertexField> com;               // [V_a, V_b]
  std::vector<VertexField> Lgam;              // L Gamma(a,b)
  std::vector<VertexField> Rcom;              // R [V_a, V_b]

  TensorCache(const LocalGeometry& geo, const std::vector<VertexField>& potentials, MConvention c)
      : g(geo), phi(potentials), conv(c), K(static_cast<int>(potentials.size())) {
    for (int a = 0; a < K; ++a) {
      vel.push_back(g.velocity(phi[a]));
      Ldir.push_back(g.L_of(directional_theta_along(g, vel[a])));
    }
    std::vector<EdgeMatrix> N(static_cast<size_t>(K) * K);
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) N[a * K + b] = 0.5 * directional_theta_along(g, Ldir[a] * phi[b]);
    Lm.resize(static_cast<size_t>(K) * K);
    gam.resize(Lm.size());
    com.resize(Lm.size());
    Lgam.resize(Lm.size());
    Rcom.resize(Lm.size());
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) {
        const int ab = a * K + b;
        const EdgeMatrix m = conv.w_sign * 2.0 * w_matrix(g, vel[a], vel[b]) -
                             conv.nabla_weight * (N[ab] + N[b * K + a]);
        Lm[ab] = g.L_of(m);
        gam[ab] = gamma_op(g, phi[a], phi[b]);
        Lgam[ab] = g.L() * gam[ab];
        com[ab] = Ldir[a] * phi[b] - Ldir[b] * phi[a];
        Rcom[ab] = g.R() * com[ab];
      }
  }

  double value(int i1, int i2, int i3, int i4) const {
    auto id = [this](int a, int b) { return a * K + b; };
    const VertexField &P1 = phi[i1], &P2 = phi[i2], &P3 = phi[i3], &P4 = phi[i4];
    double s = P2.dot(Lm[id(i1, i3)] * P4) + P1.dot(Lm[id(i2, i4)] * P3) -
               P2.dot(Lm[id(i1, i4)] * P3) - P1.dot(Lm[id(i2, i3)] * P4);
    s += gam[id(i1, i3)].dot(Lgam[id(i2, i4)]) - gam[id(i2, i3)].dot(Lgam[id(i1, i4)]);
    s += com[id(i1, i3)].dot(Rcom[id(i2, i4)]) - com[id(i2, i3)].dot(Rcom[id(i1, i4)]) +
         2.0 * com[id(i3, i4)].dot(Rcom[id(i1, i2)]);
    return 0.25 * s;
  }
};

}  // namespace

SecondDirectional second_directional(const LocalGeometry& g, const VertexField& phi1,
                                     const VertexField& phi2) {
  SecondDirectional s;
  s.W = w_matrix(g, g.velocity(phi1), g.velocity(phi2));
  s.nabla_theta_L = n_matrix(g, phi1, phi2);
  const EdgeMatrix sumN = s.nabla_theta_L + n_matrix(g, phi2, phi1);
  s.m_definition = -2.0 * s.W - sumN;
  s.m_proof = 2.0 * s.W - sumN;
  return s;
}

EdgeMatrix m_matrix(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2,
                    const MConvention& conv) {
  return conv.w_sign * 2.0 * w_matrix(g, g.velocity(phi1), g.velocity(phi2)) -
         conv.nabla_weight * (n_matrix(g, phi1, phi2) + n_matrix(g, phi2, phi1));
}

EdgeMatrix second_derivative_theta(const LocalGeometry& g, const VertexField& phi_b,
                                   const VertexField& phi_c) {
  return w_matrix(g, g.velocity(phi_c), g.velocity(phi_b)) + 2.0 * n_matrix(g, phi_b, phi_c);
}

double abcd(const LocalGeometry& g, const VertexField& a, const VertexField& b, const VertexField& c,
            const VertexField& d) {
  return a.dot(g.L_of(second_derivative_theta(g, b, c)) * d);
}

double riemann(const LocalGeometry& g, const Potentials4& phi, const MConvention& conv) {
  const std::vector<VertexField> v(phi.begin(), phi.end());
  return TensorCache(g, v, conv).value(0, 1, 2, 3);
}

EdgeMatrix gamma3(const LocalGeometry& g, const Potentials4& phi) {
  const int n = g.n();
  const EdgeMatrix& sw = g.chain().sqrt_omega();
  const EdgeMatrix A = g.grad(gamma_op(g, phi[0], phi[1]))
                           .cwiseProduct(g.grad(phi[3]))
                           .cwiseProduct(g.jet().d1);
  const EdgeMatrix g3 = g.grad(phi[2]).cwiseProduct(g.theta());
  EdgeMatrix out = EdgeMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k : g.chain().neighbors()[i]) s += sw(i, k) * (A(k, j) - A(i, j)) * g3(i, k);
      out(i, j) = 0.5 * s;
    }
  return out;
}

double riemann_explicit(const LocalGeometry& g, const Potentials4& P) {
  const int n = g.n();
  const EdgeMatrix& T = g.theta();
  const EdgeMatrix& sw = g.chain().sqrt_omega();
  const ThetaJet& J = g.jet();
  std::array<EdgeMatrix, 4> gr;
  std::array<VertexField, 4> u;  // u_i = sum_k theta_ik sqrt(omega_ik) grad_ik = -(L phi)_i
  for (int a = 0; a < 4; ++a) {
    gr[a] = g.grad(P[a]);
    u[a] = T.cwiseProduct(sw).cwiseProduct(gr[a]).rowwise().sum();
  }
  // Indices below are 1-based labels of the four potentials.
  auto S1 = [&](int a, int b, int c, int d) {
    double tot = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        tot += J.d11(i, j) * gr[a - 1](i, j) * gr[b - 1](i, j) * u[c - 1](i) * u[d - 1](i);
    return tot;
  };
  auto S2 = [&](int a, int b, int c, int d) {
    const EdgeMatrix C = gr[a - 1].cwiseProduct(gr[b - 1]).cwiseProduct(J.d12);
    const EdgeMatrix& gc = gr[c - 1];
    const EdgeMatrix& gd = gr[d - 1];
    double tot = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (sw(i, j) == 0.0) continue;
        const double left = T(i, j) * sw(i, j) * gc(i, j);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            if (sw(k, l) == 0.0) continue;
            tot += left * T(k, l) * sw(k, l) * gd(k, l) * (C(i, k) - C(i, l) - C(j, k) + C(j, l));
          }
      }
    return tot;
  };
  auto T3 = [&](int a, int b, int c, int d) {
    return gamma3(g, {P[a - 1], P[b - 1], P[c - 1], P[d - 1]}).sum();
  };
  auto gradGamma = [&](int a, int b) { return g.grad(gamma_op(g, P[a - 1], P[b - 1])); };
  auto comm = [&](int a, int b) { return commutator(g, P[a - 1], P[b - 1]); };

  const double b1 = 0.5 * (-S1(2, 4, 1, 3) - S1(1, 3, 2, 4) + S1(2, 3, 1, 4) + S1(1, 4, 2, 3));
  const double b2 = 0.125 * (-S2(2, 4, 1, 3) - S2(1, 3, 2, 4) + S2(2, 3, 1, 4) + S2(1, 4, 2, 3));
  double b3 = 0.25 * (-T3(2, 4, 1, 3) - T3(2, 4, 3, 1) - T3(1, 3, 2, 4) - T3(1, 3, 4, 2) +
                      T3(2, 3, 1, 4) + T3(2, 3, 4, 1) + T3(1, 4, 2, 3) + T3(1, 4, 3, 2));
  b3 += 0.125 * T.cwiseProduct(gradGamma(1, 3).cwiseProduct(gradGamma(2, 4)) -
                               gradGamma(2, 3).cwiseProduct(gradGamma(1, 4)))
                    .sum();
  const Eigen::MatrixXd& R = g.R();
  const double b4 = 0.25 * (comm(1, 3).dot(R * comm(2, 4)) - comm(2, 3).dot(R * comm(1, 4)) +
                            2.0 * comm(3, 4).dot(R * comm(1, 2)));
  return b1 + b2 + b3 + b4;
}

double riemann_koszul(const LocalGeometry& g, const Potentials4& P) {
  const VertexField &P1 = P[0], &P2 = P[1], &P3 = P[2], &P4 = P[3];
  const double d1 = 0.5 * (abcd(g, P4, P1, P2, P3) - abcd(g, P4, P1, P3, P2) + abcd(g, P2, P1, P4, P3));
  const double d2 = 0.5 * (abcd(g, P4, P2, P1, P3) - abcd(g, P4, P2, P3, P1) + abcd(g, P1, P2, P4, P3));
  const Eigen::MatrixXd& R = g.R();
  auto lc = [&](const VertexField& a, const VertexField& b) { return levi_civita(g, a, b).vector; };
  const VertexField bracket_potential = R * commutator(g, P1, P2);
  return d1 - lc(P2, P3).dot(R * lc(P1, P4)) - d2 + lc(P1, P3).dot(R * lc(P2, P4)) -
         lc(bracket_potential, P3).dot(P4);
}

double FrameTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

FrameTensor frame_riemann(const LocalGeometry& g, Route route, const MConvention& conv) {
  const Frame fr = orthonormal_frame(g.onsager());
  const int d = static_cast<int>(fr.potentials.size());
  FrameTensor out(d);
  if (route == Route::Tensor) {
    const TensorCache cache(g, fr.potentials, conv);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) out(a, b, c, e) = cache.value(a, b, c, e);
    return out;
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          const Potentials4 P{fr.potentials[a], fr.potentials[b], fr.potentials[c], fr.potentials[e]};
          out(a, b, c, e) = route == Route::Explicit ? riemann_explicit(g, P) : riemann_koszul(g, P);
        }
  return out;
}

double SymmetryResiduals::max() const {
  return std::max(std::max(antisym_ab, antisym_cd), std::max(pair, bianchi));
}

SymmetryResiduals symmetry_residuals(const FrameTensor& R) {
  const int d = R.dim();
  const double scale = R.max_abs();
  SymmetryResiduals s;
  if (scale == 0.0) return s;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          s.antisym_ab = std::max(s.antisym_ab, std::abs(R(a, b, c, e) + R(b, a, c, e)));
          s.antisym_cd = std::max(s.antisym_cd, std::abs(R(a, b, c, e) + R(a, b, e, c)));
          s.pair = std::max(s.pair, std::abs(R(a, b, c, e) - R(c, e, a, b)));
          s.bianchi = std::max(s.bianchi, std::abs(R(a, b, c, e) + R(b, c, a, e) + R(c, a, b, e)));
        }
  s.antisym_ab /= scale;
  s.antisym_cd /= scale;
  s.pair /= scale;
  s.bianchi /= scale;
  return s;
}

double sectional(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2) {
  const double a = inner_product(g, phi1, phi1);
  const double b = inner_product(g, phi2, phi2);
  const double c = inner_product(g, phi1, phi2);
  const double det = a * b - c * c;
  if (!(det > 1e-12 * a * b) || !(a > 0.0) || !(b > 0.0))
    raise(ErrorKind::DegeneratePlane, "tangent vectors are (nearly) linearly dependent");
  return riemann(g, {phi1, phi2, phi2, phi1}) / det;
}

RicciScalar ricci_scalar(const FrameTensor& R) {
  const int d = R.dim();
  RicciScalar out{Eigen::MatrixXd::Zero(d, d), 0.0};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) out.ricci(a, b) += R(c, a, b, c);
  out.ricci = 0.5 * (out.ricci + out.ricci.transpose()).eval();
  out.scalar = out.ricci.trace();
  return out;
}

RicciScalar ricci_scalar(const LocalGeometry& g) { return ricci_scalar(frame_riemann(g)); }

namespace {

struct Chart {
  const ReversibleChain* chain;
  const MobilityModel* model;
  VertexField p0;
  Eigen::MatrixXd B;  // n x d
  Eigen::MatrixXd A;  // n x d, B^T A = I, last row zero

  // Inverse metric sum_e omega_e theta_e (A_i - A_j)(A_i - A_j)^T, assembled per edge so that
  // mobilities of very different size do not cancel.
  Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const {
    const VertexField p = p0 + B * x;
    if (p.minCoeff() <= 0.0) raise(ErrorKind::NearSingular, "oracle stencil left the simplex");
    const int d = static_cast<int>(B.cols());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
    for (const Edge& e : chain->edges()) {
      if (e.i > e.j) continue;
      const double w = chain->omega()(e.i, e.j) *
                       model->edge_value(p(e.i), p(e.j), model->scale(*chain, e.i), model->scale(*chain, e.j));
      const Eigen::VectorXd de = (A.row(e.i) - A.row(e.j)).transpose();
      D += w * de * de.transpose();
    }
    return D;
  }
  Eigen::MatrixXd metric(const Eigen::VectorXd& x) const {
    const int d = static_cast<int>(B.cols());
    return cometric(x).ldlt().solve(Eigen::MatrixXd::Identity(d, d));
  }
};

Chart make_chart(const ReversibleChain& chain, const MobilityModel& model, const VertexField& p,
                 const Eigen::MatrixXd& basis) {
  const int n = chain.n();
  const int d = n - 1;
  Chart ch{&chain, &model, p, {}, {}};
  if (basis.size() == 0) {
    ch.B = Eigen::MatrixXd::Zero(n, d);
    ch.B.topRows(d).setIdentity();
    ch.B.row(d).setConstant(-1.0);
  } else {
    if (basis.rows() != n || basis.cols() != d)
      raise(ErrorKind::InvalidArgument, "chart basis must be n x (n-1)");
    if (basis.colwise().sum().cwiseAbs().maxCoeff() > 1e-12 * basis.cwiseAbs().maxCoeff())
      raise(ErrorKind::InvalidArgument, "chart basis columns must sum to zero");
    ch.B = basis;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(ch.B.topRows(d).transpose());
  if (!lu.isInvertible()) raise(ErrorKind::InvalidArgument, "chart basis is not a tangent basis");
  ch.A = Eigen::MatrixXd::Zero(n, d);
  ch.A.topRows(d) = lu.solve(Eigen::MatrixXd::Identity(d, d));
  return ch;
}

template <class F>
auto fd(const F& f, const Eigen::VectorXd& x, int k, double h, bool fourth) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
  e(k) = h;
  if (fourth) return ((-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * h)).eval();
  return ((f(x + e) - f(x - e)) / (2.0 * h)).eval();
}

// Christoffel symbols of the second kind, C[k](i,j) = Gamma^k_ij.
std::vector<Eigen::MatrixXd> christoffel(const Chart& chart, const Eigen::VectorXd& x, double h,
                                         bool fourth) {
  const int d = static_cast<int>(x.size());
  auto met = [&](const Eigen::VectorXd& y) { return chart.metric(y); };
  const Eigen::MatrixXd Gi = chart.cometric(x);
  std::vector<Eigen::MatrixXd> dG;
  for (int k = 0; k < d; ++k) dG.push_back(fd(met, x, k, h, fourth));
  std::vector<Eigen::MatrixXd> first(d, Eigen::MatrixXd::Zero(d, d));  // Gamma_{m,ij}
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) first[m](i, j) = 0.5 * (dG[i](m, j) + dG[j](m, i) - dG[m](i, j));
  std::vector<Eigen::MatrixXd> C(d, Eigen::MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m) C[k] += Gi(k, m) * first[m];
  return C;
}

}  // namespace

ChartTensor chart_curvature_oracle(const ReversibleChain& chain, const MobilityModel& model,
                                   const SimplexPoint& p, const ChartOptions& opts) {
  const int n = chain.n();
  const int d = n - 1;
  const double s = opts.scale_steps ? std::min(1.0, n * p.p().minCoeff()) : 1.0;
  const double hG = opts.h_metric * s, hC = opts.h_christoffel * s;
  const Chart chart = make_chart(chain, model, p.p(), opts.basis);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(d);

  // Flattened Christoffels so the outer difference acts on a single vector.
  auto flat = [&](const Eigen::VectorXd& y) {
    const auto C = christoffel(chart, y, hG, opts.fourth_order);
    Eigen::VectorXd v(d * d * d);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v((k * d + i) * d + j) = C[k](i, j);
    return v;
  };
  const Eigen::VectorXd C0 = flat(x);
  std::vector<Eigen::VectorXd> dC;
  for (int k = 0; k < d; ++k) dC.push_back(fd(flat, x, k, hC, opts.fourth_order));
  auto Cs = [&](const Eigen::VectorXd& v, int m, int i, int j) { return v((m * d + i) * d + j); };

  ChartTensor out;
  out.d = d;
  out.metric = chart.metric(x);
  out.dual = chart.A.transpose();
  out.values.assign(static_cast<size_t>(d) * d * d * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        Eigen::VectorXd up(d);
        for (int m = 0; m < d; ++m) {
          double v = Cs(dC[a], m, b, c) - Cs(dC[b], m, a, c);
          for (int e = 0; e < d; ++e) v += Cs(C0, e, b, c) * Cs(C0, m, a, e) - Cs(C0, e, a, c) * Cs(C0, m, b, e);
          up(m) = v;
        }
        const Eigen::VectorXd low = out.metric * up;
        for (int e = 0; e < d; ++e) out.values[((a * d + b) * d + c) * d + e] = low(e);
      }
  return out;
}

double contract(const ChartTensor& Rt, const VertexField& v1, const VertexField& v2,
                const VertexField& v3, const VertexField& v4) {
  const int d = Rt.d;
  const Eigen::VectorXd x1 = Rt.dual * v1, x2 = Rt.dual * v2, x3 = Rt.dual * v3, x4 = Rt.dual * v4;
  double s = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) s += Rt.at(a, b, c, e) * x1(a) * x2(b) * x3(c) * x4(e);
  return s;
}

FrameTensor chart_on_frame(const ChartTensor& Rt, const Frame& frame) {
  const int d = static_cast<int>(frame.vectors.size());
  FrameTensor out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
          out(a, b, c, e) = contract(Rt, frame.vectors[a], frame.vectors[b], frame.vectors[c], frame.vectors[e]);
  return out;
}

double relative_deviation(const FrameTensor& A, const FrameTensor& B) {
  const int d = A.dim();
  const double scale = std::max(A.max_abs(), B.max_abs());
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) worst = std::max(worst, std::abs(A(a, b, c, e) - B(a, b, c, e)));
  return worst / scale;
}

MArbitration arbitrate_m(const LocalGeometry& g, const FrameTensor& chart_frame) {
  MArbitration out;
  const auto cands = m_candidates();
  size_t verified = 0;
  for (size_t k = 0; k < cands.size(); ++k) {
    out.residuals[k] = relative_deviation(frame_riemann(g, Route::Tensor, cands[k]), chart_frame);
    if (cands[k].w_sign == kVerifiedM.w_sign && cands[k].nabla_weight == kVerifiedM.nabla_weight) verified = k;
  }
  std::array<double, 4> sorted = out.residuals;
  std::sort(sorted.begin(), sorted.end());
  out.decisive = sorted[0] < 0.1 * sorted[1];
  size_t best = verified;
  for (size_t k = 0; k < cands.size(); ++k)
    if (out.residuals[k] < 0.1 * out.residuals[best]) best = k;
  out.chosen = cands[best];
  return out;
}

CurvatureReport analyze_curvature(const ReversibleChain& chain, const MobilityModel& model,
                                  const SimplexPoint& p, const ChartOptions& chart) {
  const LocalGeometry g(chain, model, p);
  const Frame fr = orthonormal_frame(g.onsager());
  const FrameTensor chart_frame = chart_on_frame(chart_curvature_oracle(chain, model, p, chart), fr);

  CurvatureReport rep;
  rep.point = p.p();
  rep.m = arbitrate_m(g, chart_frame);
  rep.riemann = frame_riemann(g, Route::Tensor, rep.m.chosen);
  rep.oracle_residual = relative_deviation(rep.riemann, chart_frame);
  rep.explicit_residual = relative_deviation(rep.riemann, frame_riemann(g, Route::Explicit));
  rep.koszul_residual = relative_deviation(rep.riemann, frame_riemann(g, Route::Koszul));
  rep.symmetry = symmetry_residuals(rep.riemann);
  const int d = rep.riemann.dim();
  rep.sectional = Eigen::MatrixXd::Zero(d, d);
  // Frame vectors are orthonormal, so K(e_a, e_b) = <R(e_a,e_b)e_b,e_a>.
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (a != b) rep.sectional(a, b) = rep.riemann(a, b, b, a);
  const RicciScalar rs = ricci_scalar(rep.riemann);
  rep.ricci = rs.ricci;
  rep.scalar = rs.scalar;
  return rep;
}

}  // namespace onsager
