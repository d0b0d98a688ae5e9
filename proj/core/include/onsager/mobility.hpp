#pragma once

#include <functional>
#include <string>

#include "onsager/graph.hpp"

namespace onsager {

inline constexpr double kBoundaryEps = 1e-9;
inline constexpr double kSimplexSumTol = 1e-12;

// Strictly positive probability vector summing to one.
class SimplexPoint {
 public:
  explicit SimplexPoint(VertexField p, double eps_boundary = kBoundaryEps);
  static SimplexPoint uniform(int n);

  const VertexField& p() const { return p_; }
  int n() const { return static_cast<int>(p_.size()); }
  double operator()(int i) const { return p_(i); }

  // Throws BoundaryPoint when p is outside the eps-interior or off the unit-sum plane.
  static void check(const VertexField& p, double eps_boundary = kBoundaryEps,
                    double sum_tol = kSimplexSumTol);

 private:
  VertexField p_;
};

enum class MobilityKind { KLLogMean, AlphaMean, GeometricMean, Custom };

// Reference: ratios r_i = p_i / pi_i.
// LatticeScaled: uniform-pi scaled parameterization, r_i = c p_i for f-means and
// theta_ij = c p_i^beta p_j^beta for the geometric mean.
enum class Convention { Reference, LatticeScaled };

struct CustomF {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

// First and second partials of theta_ab with respect to its own arguments p_a, p_b.
struct EdgeJet {
  double theta;
  double d_a;
  double d_aa;
  double d_ab;
};

class MobilityModel {
 public:
  static MobilityModel kl(Convention conv = Convention::Reference, double c = 1.0);
  static MobilityModel alpha(double alpha, Convention conv = Convention::Reference, double c = 1.0);
  static MobilityModel geometric(double beta = 0.5, double c = 1.0,
                                 Convention conv = Convention::Reference);
  static MobilityModel custom(CustomF fns, Convention conv = Convention::Reference, double c = 1.0);

  MobilityKind kind() const { return kind_; }
  Convention convention() const { return conv_; }
  double alpha_param() const { return alpha_; }
  double beta() const { return beta_; }
  double c() const { return c_; }
  bool has_f() const { return kind_ != MobilityKind::GeometricMean; }
  std::string describe() const;

  // Derivative of f of the given order (0..4 for built-ins, 0..2 for Custom).
  double f(double z, int order = 0) const;

  // Ratio scale s_i: p_i -> r_i = s_i p_i.
  double scale(const ReversibleChain& chain, int i) const;

  // Mobility of one edge as a function of (p_a, p_b), with analytic or FD partials.
  EdgeJet edge(double pa, double pb, double sa, double sb) const;
  double edge_value(double pa, double pb, double sa, double sb) const;

 private:
  MobilityModel() = default;
  MobilityKind kind_ = MobilityKind::KLLogMean;
  Convention conv_ = Convention::Reference;
  double alpha_ = 0.0;
  double beta_ = 0.5;
  double c_ = 1.0;
  CustomF custom_;
};

// theta and its partials on every ordered edge, as dense matrices:
// d1(i,j) = d theta_ij / d p_i, d11(i,j) = d^2 theta_ij / d p_i^2, d12(i,j) = d^2 theta_ij / d p_i d p_j.
struct ThetaJet {
  EdgeMatrix theta;
  EdgeMatrix d1;
  EdgeMatrix d11;
  EdgeMatrix d12;
};

// No simplex check: callers evaluating off-plane (finite differences) use this directly.
ThetaJet theta_jet_unchecked(const MobilityModel& model, const ReversibleChain& chain,
                             const VertexField& p);
ThetaJet theta_jet(const MobilityModel& model, const ReversibleChain& chain, const SimplexPoint& p);

EdgeMatrix theta(const MobilityModel& model, const ReversibleChain& chain, const SimplexPoint& p);
double theta_partial(const MobilityModel& model, const ReversibleChain& chain, const SimplexPoint& p,
                     int i, int j, int k);
double theta_second_partial(const MobilityModel& model, const ReversibleChain& chain,
                            const SimplexPoint& p, int i, int j, int k, int l);

// D_f(p | pi) = sum_i f(r_i) / s_i and its Euclidean gradient (f'(r_i))_i.
double f_divergence(const MobilityModel& model, const ReversibleChain& chain, const VertexField& p);
VertexField f_divergence_gradient(const MobilityModel& model, const ReversibleChain& chain,
                                  const VertexField& p);
// Diagonal of the Euclidean Hessian: s_i f''(r_i).
VertexField f_divergence_hessian_diag(const MobilityModel& model, const ReversibleChain& chain,
                                      const VertexField& p);

}  // namespace onsager
