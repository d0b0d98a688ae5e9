#pragma once

#include <functional>
#include <vector>

#include "onsager/metric.hpp"

namespace onsager {

struct Trajectory {
  std::vector<double> times;
  std::vector<VertexField> states;
  std::vector<double> energy;                 // D_f(p(t) | pi)
  std::vector<double> dissipation_quadratic;  // -grad D^T L grad D
  std::vector<double> dissipation_edgesum;    // -1/2 sum (grad_omega grad D)^2 theta
};

// Smooth energy with Euclidean derivatives; hessian may be empty (finite-difference fallback).
struct Energy {
  std::function<double(const VertexField&)> value;
  std::function<VertexField(const VertexField&)> gradient;
  std::function<Eigen::MatrixXd(const VertexField&)> hessian;
};

Energy f_divergence_energy(const MobilityModel& model, const ReversibleChain& chain);
Eigen::MatrixXd energy_hessian(const Energy& F, const VertexField& p);

VertexField master_rhs(const ReversibleChain& chain, const VertexField& p);
VertexField gradient_flow_rhs(const ReversibleChain& chain, const MobilityModel& model,
                              const SimplexPoint& p);
VertexField metric_gradient(const ReversibleChain& chain, const MobilityModel& model,
                            const Energy& F, const SimplexPoint& p);

double dissipation_quadratic(const ReversibleChain& chain, const MobilityModel& model,
                             const SimplexPoint& p);
double dissipation_edgesum(const ReversibleChain& chain, const MobilityModel& model,
                           const SimplexPoint& p);

struct IntegrateOptions {
  int max_halvings = 20;
  double eps_boundary = kBoundaryEps;
};

// RK4 on the master equation with the energy and dissipation recorded at every grid time.
Trajectory integrate(const ReversibleChain& chain, const MobilityModel& model, const SimplexPoint& p0,
                     double T, double dt, const IntegrateOptions& opts = {});

// exp(t A^T) p0 for the generator A, by Taylor series with scaling and squaring.
VertexField master_exact(const ReversibleChain& chain, const VertexField& p0, double t);
Eigen::MatrixXd expm(const Eigen::MatrixXd& A);

}  // namespace onsager
