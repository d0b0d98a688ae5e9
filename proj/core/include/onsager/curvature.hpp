#pragma once

#include <array>
#include <string>
#include <vector>

#include "onsager/connection.hpp"

namespace onsager {

// Coefficients of m(a,b) = w_sign * 2 W_ab - nabla_weight * (N(a,b) + N(b,a)),
// where N is the half-weighted d theta contraction of L(V_a theta) phi_b.
struct MConvention {
  double w_sign = -1.0;
  double nabla_weight = 2.0;
  std::string label() const;
};

// Convention that reproduces the Koszul and chart values (selected by the oracle check).
inline constexpr MConvention kVerifiedM{-1.0, 2.0};
// The four candidates the arbitration compares.
std::array<MConvention, 4> m_candidates();

struct SecondDirectional {
  EdgeMatrix W;              // W_{phi1,phi2} theta
  EdgeMatrix nabla_theta_L;  // 1/2 [d_i theta y_i + d_j theta y_j], y = L(V1 theta) phi2
  EdgeMatrix m_definition;   // -2W - (N12 + N21)
  EdgeMatrix m_proof;        // +2W - (N12 + N21)
};

SecondDirectional second_directional(const LocalGeometry& g, const VertexField& phi1,
                                     const VertexField& phi2);
EdgeMatrix m_matrix(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2,
                    const MConvention& conv = kVerifiedM);
// Second directional derivative V_b V_c theta = W_{c,b} + 2 N(b,c).
EdgeMatrix second_derivative_theta(const LocalGeometry& g, const VertexField& phi_b,
                                   const VertexField& phi_c);
// (abcd) = phi_a^T L(V_b V_c theta) phi_d.
double abcd(const LocalGeometry& g, const VertexField& a, const VertexField& b, const VertexField& c,
            const VertexField& d);

using Potentials4 = std::array<VertexField, 4>;

// <R(V1,V2)V3, V4> through the m-matrix / Gamma / commutator formula.
double riemann(const LocalGeometry& g, const Potentials4& phi, const MConvention& conv = kVerifiedM);
// Same quantity through edge sums with second partials, the four-index difference operator and Gamma^3.
double riemann_explicit(const LocalGeometry& g, const Potentials4& phi);
// Same quantity through the Koszul expansion of nabla nabla - nabla nabla - nabla_[,].
double riemann_koszul(const LocalGeometry& g, const Potentials4& phi);

EdgeMatrix gamma3(const LocalGeometry& g, const Potentials4& phi);

// Components on the orthonormal frame, index order (a, b, c, d) -> <R(e_a,e_b)e_c, e_d>.
class FrameTensor {
 public:
  explicit FrameTensor(int d) : d_(d), data_(static_cast<size_t>(d) * d * d * d, 0.0) {}
  int dim() const { return d_; }
  double& operator()(int a, int b, int c, int e) { return data_[((a * d_ + b) * d_ + c) * d_ + e]; }
  double operator()(int a, int b, int c, int e) const { return data_[((a * d_ + b) * d_ + c) * d_ + e]; }
  double max_abs() const;

 private:
  int d_;
  std::vector<double> data_;
};

enum class Route { Tensor, Explicit, Koszul };
FrameTensor frame_riemann(const LocalGeometry& g, Route route = Route::Tensor,
                          const MConvention& conv = kVerifiedM);

struct SymmetryResiduals {
  double antisym_ab = 0.0;
  double antisym_cd = 0.0;
  double pair = 0.0;
  double bianchi = 0.0;
  double max() const;
};
// Residuals relative to the largest component.
SymmetryResiduals symmetry_residuals(const FrameTensor& R);

double sectional(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2);

struct RicciScalar {
  Eigen::MatrixXd ricci;
  double scalar;
};
RicciScalar ricci_scalar(const FrameTensor& R);
RicciScalar ricci_scalar(const LocalGeometry& g);

struct ChartOptions {
  double h_metric = 1e-3;       // step for metric derivatives
  double h_christoffel = 1e-3;  // step for Christoffel derivatives
  bool fourth_order = true;     // five-point stencils; false gives three-point central
  bool scale_steps = true;      // multiply steps by min(1, n min_i p_i)
  // Tangent basis (n x (n-1), columns summing to zero) defining the chart p = p0 + B x.
  // Empty selects x = (p_1..p_{n-1}).
  Eigen::MatrixXd basis;
};

// Lowered tensor Rt[a,b,c,d] = <R(d_a, d_b) d_c, d_d> in the chart coordinates.
struct ChartTensor {
  int d = 0;
  std::vector<double> values;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd dual;  // (n-1) x n; chart components of a tangent vector v are dual * v
  double at(int a, int b, int c, int e) const { return values[((a * d + b) * d + c) * d + e]; }
};

ChartTensor chart_curvature_oracle(const ReversibleChain& chain, const MobilityModel& model,
                                   const SimplexPoint& p, const ChartOptions& opts = {});
// Contract with ambient tangent vectors (each summing to zero).
double contract(const ChartTensor& Rt, const VertexField& v1, const VertexField& v2,
                const VertexField& v3, const VertexField& v4);
FrameTensor chart_on_frame(const ChartTensor& Rt, const Frame& frame);

// max |A - B| / max(|A|max, |B|max), componentwise over frame tensors.
double relative_deviation(const FrameTensor& A, const FrameTensor& B);

// The verified convention is kept unless another candidate beats it tenfold; decisive is false when
// the best two candidates are within that factor (e.g. at symmetric points where W vanishes).
struct MArbitration {
  MConvention chosen;
  std::array<double, 4> residuals;  // per m_candidates(), relative to the chart oracle
  bool decisive = false;
};
MArbitration arbitrate_m(const LocalGeometry& g, const FrameTensor& chart_frame);

struct CurvatureReport {
  VertexField point;
  FrameTensor riemann{1};
  Eigen::MatrixXd sectional;  // K(e_a, e_b), a != b; diagonal unused
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  double oracle_residual = 0.0;    // tensor route vs chart oracle
  double explicit_residual = 0.0;  // tensor route vs explicit route
  double koszul_residual = 0.0;    // tensor route vs Koszul route
  SymmetryResiduals symmetry;
  MArbitration m;
};

CurvatureReport analyze_curvature(const ReversibleChain& chain, const MobilityModel& model,
                                  const SimplexPoint& p, const ChartOptions& chart = {});

}  // namespace onsager
