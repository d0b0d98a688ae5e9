#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "onsager/dynamics.hpp"
#include "onsager/metric.hpp"

namespace onsager {

// (V_phi theta)_ij = d_i theta_ij (V_phi)_i + d_j theta_ij (V_phi)_j.
EdgeMatrix directional_theta(const LocalGeometry& g, const VertexField& phi);
// Same contraction for an arbitrary ambient vector v (not necessarily L phi).
EdgeMatrix directional_theta_along(const LocalGeometry& g, const VertexField& v);

// Gamma(phi1, phi2)_i = sum_j grad(phi1)_ij grad(phi2)_ij d_i theta_ij.
VertexField gamma_op(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2);

// [V1, V2] = L(V1 theta) phi2 - L(V2 theta) phi1.
VertexField commutator(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2);

struct ConnectionValue {
  VertexField vector;                 // nabla_{V1} V2, sums to zero
  std::optional<double> scalar_form;  // <nabla_{V1} V2, V3>
};

ConnectionValue levi_civita(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2,
                            const std::optional<VertexField>& phi3 = std::nullopt);
// Scalar form written only through Gamma: 1/4 sum_E {grad1 grad Gamma(2,3) - ... } theta.
double levi_civita_scalar_gamma(const LocalGeometry& g, const VertexField& phi1,
                                const VertexField& phi2, const VertexField& phi3);
// Potential of nabla_{V1} V2 in mean-zero gauge.
VertexField levi_civita_potential(const LocalGeometry& g, const VertexField& phi1,
                                  const VertexField& phi2);

struct GeodesicRecord {
  std::vector<double> times;
  std::vector<VertexField> gamma;
  std::vector<VertexField> phi;
  std::vector<double> speed;  // sqrt(<V_phi, V_phi>)
};

struct OdeOptions {
  double eps_boundary = kBoundaryEps;
  bool record = true;  // false keeps only the endpoints
};

GeodesicRecord geodesic_ivp(const ReversibleChain& chain, const MobilityModel& model,
                            const SimplexPoint& p0, const VertexField& phi0, double T, double dt,
                            const OdeOptions& opts = {});

struct BvpOptions {
  int steps = 200;  // RK4 steps on [0, 1]
  int max_iterations = 50;
  int restarts = 8;
  double tolerance = 1e-7;  // max-norm endpoint residual
  std::uint64_t seed = 20240531;
};

struct BvpResult {
  VertexField phi0;
  GeodesicRecord path;
  double length = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

BvpResult geodesic_bvp(const ReversibleChain& chain, const MobilityModel& model,
                       const SimplexPoint& p0, const SimplexPoint& p1, const BvpOptions& opts = {});

struct GeodesicPath {
  VertexField p0;
  VertexField phi0;
  double T = 1.0;
  double dt = 1e-3;
};

// Uniformly sampled curve with an even number of intervals; RK4 uses odd samples as midpoints.
struct SampledCurve {
  std::vector<double> times;
  std::vector<VertexField> samples;
};

using PathSpec = std::variant<GeodesicPath, SampledCurve>;

struct TransportState {
  double t;
  VertexField gamma;
  VertexField phi;
  std::vector<VertexField> eta;
};

// Parallel transport of one or more potentials along the path; each eta is kept in mean-zero gauge.
std::vector<TransportState> parallel_transport(const ReversibleChain& chain,
                                               const MobilityModel& model, const PathSpec& path,
                                               const std::vector<VertexField>& eta0);

// Hessian of F at p in directions V_phi1, V_phi2.
double hessian_form(const LocalGeometry& g, const Energy& F, const VertexField& phi1,
                    const VertexField& phi2);
double hessian_form_explicit(const LocalGeometry& g, const Energy& F, const VertexField& phi1,
                             const VertexField& phi2);

}  // namespace onsager
