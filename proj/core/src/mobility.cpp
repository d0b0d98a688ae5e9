#include "onsager/mobility.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "onsager/error.hpp"

namespace onsager {

namespace {

constexpr double kRatioSwitch = 1e-7;  // Custom: equal-ratio limit branch
constexpr double kH1 = 1e-6;
constexpr double kH2 = 1e-4;
// Built-in f-means switch to quadrature of int_0^1 f''(a + t(b-a)) dt inside this relative band.
constexpr double kQuadratureBand = 0.5;

struct GaussLegendre {
  static constexpr int kN = 16;
  std::array<double, kN> t{};  // nodes mapped to [0, 1]
  std::array<double, kN> w{};  // weights summing to 1

  GaussLegendre() {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < kN; ++k) {
      double x = std::cos(pi * (k + 0.75) / (kN + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int m = 2; m <= kN; ++m) {
          double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
          p0 = p1;
          p1 = p2;
        }
        dp = kN * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      t[k] = 0.5 * (x + 1.0);
      w[k] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) halved for [0,1]
    }
  }
};

const GaussLegendre& gauss() {
  static const GaussLegendre g;
  return g;
}

}  // namespace

SimplexPoint::SimplexPoint(VertexField p, double eps_boundary) : p_(std::move(p)) {
  check(p_, eps_boundary);
}

SimplexPoint SimplexPoint::uniform(int n) {
  return SimplexPoint(VertexField::Constant(n, 1.0 / n));
}

void SimplexPoint::check(const VertexField& p, double eps_boundary, double sum_tol) {
  if (p.size() < 2) raise(ErrorKind::InvalidArgument, "point needs at least two states");
  for (int i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i)) || p(i) < eps_boundary) {
      std::ostringstream os;
      os << "component " << i + 1 << " = " << p(i) << " is below the interior margin";
      raise(ErrorKind::BoundaryPoint, os.str());
    }
  }
  const double s = p.sum();
  if (std::abs(s - 1.0) > sum_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "components sum to " << s;
    raise(ErrorKind::BoundaryPoint, os.str());
  }
}

MobilityModel MobilityModel::kl(Convention conv, double c) {
  MobilityModel m;
  m.kind_ = MobilityKind::KLLogMean;
  m.conv_ = conv;
  m.c_ = c;
  if (!(c > 0.0)) raise(ErrorKind::InvalidArgument, "c must be positive");
  return m;
}

MobilityModel MobilityModel::alpha(double alpha, Convention conv, double c) {
  if (alpha == 1.0) raise(ErrorKind::InvalidArgument, "alpha = 1 is excluded; use the KL model");
  if (!(c > 0.0)) raise(ErrorKind::InvalidArgument, "c must be positive");
  MobilityModel m;
  m.kind_ = MobilityKind::AlphaMean;
  m.conv_ = conv;
  m.alpha_ = alpha;
  m.c_ = c;
  return m;
}

MobilityModel MobilityModel::geometric(double beta, double c, Convention conv) {
  if (!(c > 0.0)) raise(ErrorKind::InvalidArgument, "c must be positive");
  MobilityModel m;
  m.kind_ = MobilityKind::GeometricMean;
  m.conv_ = conv;
  m.beta_ = beta;
  m.c_ = c;
  return m;
}

MobilityModel MobilityModel::custom(CustomF fns, Convention conv, double c) {
  if (!fns.f || !fns.d1 || !fns.d2)
    raise(ErrorKind::InvalidArgument, "custom model needs f, f' and f''");
  if (std::abs(fns.f(1.0)) > 1e-12) raise(ErrorKind::InvalidArgument, "custom f must satisfy f(1) = 0");
  MobilityModel m;
  m.kind_ = MobilityKind::Custom;
  m.conv_ = conv;
  m.c_ = c;
  m.custom_ = std::move(fns);
  return m;
}

std::string MobilityModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case MobilityKind::KLLogMean: os << "kl"; break;
    case MobilityKind::AlphaMean: os << "alpha(alpha=" << alpha_ << ")"; break;
    case MobilityKind::GeometricMean: os << "geometric(beta=" << beta_ << ")"; break;
    case MobilityKind::Custom: os << "custom"; break;
  }
  os << (conv_ == Convention::Reference ? " reference" : " lattice-scaled") << " c=" << c_;
  return os.str();
}

double MobilityModel::f(double z, int order) const {
  switch (kind_) {
    case MobilityKind::KLLogMean:
      switch (order) {
        case 0: return z * std::log(z) - z + 1.0;
        case 1: return std::log(z);
        case 2: return 1.0 / z;
        case 3: return -1.0 / (z * z);
        case 4: return 2.0 / (z * z * z);
        default: break;
      }
      break;
    case MobilityKind::AlphaMean: {
      const double a = alpha_;
      const double q = 0.5 * (a - 3.0);
      switch (order) {
        case 0:
          if (a == -1.0) return z - 1.0 - std::log(z);
          return 4.0 / (1.0 - a * a) * (0.5 * (1.0 - a) + 0.5 * (1.0 + a) * z - std::pow(z, 0.5 * (1.0 + a)));
        case 1: return 2.0 / (1.0 - a) * (1.0 - std::pow(z, 0.5 * (a - 1.0)));
        case 2: return std::pow(z, q);
        case 3: return q * std::pow(z, q - 1.0);
        case 4: return q * (q - 1.0) * std::pow(z, q - 2.0);
        default: break;
      }
      break;
    }
    case MobilityKind::Custom:
      switch (order) {
        case 0: return custom_.f(z);
        case 1: return custom_.d1(z);
        case 2: return custom_.d2(z);
        default: break;
      }
      break;
    case MobilityKind::GeometricMean:
      raise(ErrorKind::NoDivergenceDefined, "the geometric mean has no paired f");
  }
  raise(ErrorKind::InvalidArgument, "derivative order not available for this model");
}

double MobilityModel::scale(const ReversibleChain& chain, int i) const {
  if (conv_ == Convention::Reference) return 1.0 / chain.pi()(i);
  return kind_ == MobilityKind::GeometricMean ? 1.0 : c_;
}

double MobilityModel::edge_value(double pa, double pb, double sa, double sb) const {
  const double a = sa * pa;
  const double b = sb * pb;
  if (kind_ == MobilityKind::GeometricMean) return c_ * std::pow(a * b, beta_);
  if (kind_ == MobilityKind::Custom) {
    if (std::abs(b - a) < kRatioSwitch) {
      // Divided difference of f' at the midpoint; the next Taylor term is O(h^2) f'''' and below roundoff here.
      const double f2 = f(0.5 * (a + b), 2);
      if (!(f2 > 0.0)) raise(ErrorKind::NonconvexF, "f'' <= 0 at the evaluation point");
      return 1.0 / f2;
    }
    if (!(f(a, 2) > 0.0) || !(f(b, 2) > 0.0))
      raise(ErrorKind::NonconvexF, "f'' <= 0 at the evaluation point");
    return (b - a) / (f(b, 1) - f(a, 1));
  }
  return edge(pa, pb, sa, sb).theta;
}

EdgeJet MobilityModel::edge(double pa, double pb, double sa, double sb) const {
  if (kind_ == MobilityKind::GeometricMean) {
    const double th = c_ * std::pow(sa * pa * sb * pb, beta_);
    return {th, beta_ * th / pa, beta_ * (beta_ - 1.0) * th / (pa * pa), beta_ * beta_ * th / (pa * pb)};
  }
  if (kind_ == MobilityKind::Custom) {
    auto val = [&](double x, double y) { return edge_value(x, y, sa, sb); };
    const double th = val(pa, pb);
    const double da = (val(pa + kH1, pb) - val(pa - kH1, pb)) / (2.0 * kH1);
    const double daa = (val(pa + kH2, pb) - 2.0 * th + val(pa - kH2, pb)) / (kH2 * kH2);
    const double dab = (val(pa + kH2, pb + kH2) - val(pa + kH2, pb - kH2) - val(pa - kH2, pb + kH2) +
                        val(pa - kH2, pb - kH2)) /
                       (4.0 * kH2 * kH2);
    return {th, da, daa, dab};
  }

  const double a = sa * pa;
  const double b = sb * pb;
  const double h = b - a;
  double th, ta, taa, tab;
  if (std::abs(h) <= kQuadratureBand * std::min(a, b)) {
    // theta = 1 / M with M = int_0^1 f''(a + t h) dt; derivatives under the integral sign.
    const GaussLegendre& g = gauss();
    double M = 0, Ma = 0, Mb = 0, Maa = 0, Mab = 0;
    for (int k = 0; k < GaussLegendre::kN; ++k) {
      const double t = g.t[k];
      const double z = a + t * h;
      const double f2 = f(z, 2), f3 = f(z, 3), f4 = f(z, 4);
      M += g.w[k] * f2;
      Ma += g.w[k] * (1.0 - t) * f3;
      Mb += g.w[k] * t * f3;
      Maa += g.w[k] * (1.0 - t) * (1.0 - t) * f4;
      Mab += g.w[k] * t * (1.0 - t) * f4;
    }
    th = 1.0 / M;
    ta = -Ma / (M * M);
    taa = -Maa / (M * M) + 2.0 * Ma * Ma / (M * M * M);
    tab = -Mab / (M * M) + 2.0 * Ma * Mb / (M * M * M);
  } else {
    double D;
    if (kind_ == MobilityKind::KLLogMean) {
      D = std::log(b / a);
    } else {
      const double e = 0.5 * (alpha_ - 1.0);
      D = 2.0 / (1.0 - alpha_) * (std::pow(a, e) - std::pow(b, e));
    }
    const double N = h;
    const double fa = f(a, 2), fb = f(b, 2);
    const double r = N * fa - D;
    th = N / D;
    ta = r / (D * D);
    taa = N * f(a, 3) / (D * D) + 2.0 * fa * r / (D * D * D);
    tab = (fa - fb) / (D * D) - 2.0 * fb * r / (D * D * D);
  }
  return {th, sa * ta, sa * sa * taa, sa * sb * tab};
}

ThetaJet theta_jet_unchecked(const MobilityModel& model, const ReversibleChain& chain,
                             const VertexField& p) {
  const int n = chain.n();
  ThetaJet J{EdgeMatrix::Zero(n, n), EdgeMatrix::Zero(n, n), EdgeMatrix::Zero(n, n),
             EdgeMatrix::Zero(n, n)};
  for (const Edge& e : chain.edges()) {
    const double si = model.scale(chain, e.i), sj = model.scale(chain, e.j);
    const EdgeJet u = model.edge(p(e.i), p(e.j), si, sj);
    const EdgeJet v = model.edge(p(e.j), p(e.i), sj, si);
    J.theta(e.i, e.j) = J.theta(e.j, e.i) = u.theta;
    J.d1(e.i, e.j) = u.d_a;
    J.d1(e.j, e.i) = v.d_a;
    J.d11(e.i, e.j) = u.d_aa;
    J.d11(e.j, e.i) = v.d_aa;
    J.d12(e.i, e.j) = J.d12(e.j, e.i) = u.d_ab;
  }
  return J;
}

ThetaJet theta_jet(const MobilityModel& model, const ReversibleChain& chain, const SimplexPoint& p) {
  if (p.n() != chain.n()) raise(ErrorKind::InvalidArgument, "point dimension does not match chain");
  return theta_jet_unchecked(model, chain, p.p());
}

EdgeMatrix theta(const MobilityModel& model, const ReversibleChain& chain, const SimplexPoint& p) {
  if (p.n() != chain.n()) raise(ErrorKind::InvalidArgument, "point dimension does not match chain");
  const int n = chain.n();
  EdgeMatrix T = EdgeMatrix::Zero(n, n);
  for (const Edge& e : chain.edges()) {
    T(e.i, e.j) = T(e.j, e.i) = model.edge_value(p(e.i), p(e.j), model.scale(chain, e.i),
                                                  model.scale(chain, e.j));
  }
  return T;
}

namespace {

void require_edge_vertex(const ReversibleChain& chain, int i, int j, int k) {
  if (i < 0 || j < 0 || i >= chain.n() || j >= chain.n() || !chain.adjacent(i, j))
    raise(ErrorKind::InvalidArgument, "pair is not an edge");
  if (k != i && k != j) raise(ErrorKind::UnsupportedVertex, "theta_ij depends only on p_i and p_j");
}

}  // namespace

double theta_partial(const MobilityModel& model, const ReversibleChain& chain, const SimplexPoint& p,
                     int i, int j, int k) {
  require_edge_vertex(chain, i, j, k);
  const int other = k == i ? j : i;
  return model.edge(p(k), p(other), model.scale(chain, k), model.scale(chain, other)).d_a;
}

double theta_second_partial(const MobilityModel& model, const ReversibleChain& chain,
                            const SimplexPoint& p, int i, int j, int k, int l) {
  require_edge_vertex(chain, i, j, k);
  require_edge_vertex(chain, i, j, l);
  const int other = k == i ? j : i;
  const EdgeJet u = model.edge(p(k), p(other), model.scale(chain, k), model.scale(chain, other));
  return k == l ? u.d_aa : u.d_ab;
}

double f_divergence(const MobilityModel& model, const ReversibleChain& chain, const VertexField& p) {
  if (!model.has_f()) raise(ErrorKind::NoDivergenceDefined, "the geometric mean has no paired f");
  double d = 0.0;
  for (int i = 0; i < chain.n(); ++i) {
    const double s = model.scale(chain, i);
    d += model.f(s * p(i), 0) / s;
  }
  return d;
}

VertexField f_divergence_gradient(const MobilityModel& model, const ReversibleChain& chain,
                                  const VertexField& p) {
  if (!model.has_f()) raise(ErrorKind::NoDivergenceDefined, "the geometric mean has no paired f");
  VertexField g(chain.n());
  for (int i = 0; i < chain.n(); ++i) g(i) = model.f(model.scale(chain, i) * p(i), 1);
  return g;
}

VertexField f_divergence_hessian_diag(const MobilityModel& model, const ReversibleChain& chain,
                                      const VertexField& p) {
  if (!model.has_f()) raise(ErrorKind::NoDivergenceDefined, "the geometric mean has no paired f");
  VertexField h(chain.n());
  for (int i = 0; i < chain.n(); ++i) {
    const double s = model.scale(chain, i);
    h(i) = s * model.f(s * p(i), 2);
  }
  return h;
}

}  // namespace onsager
