#pragma once

#include <vector>

#include "onsager/mobility.hpp"

namespace onsager {

inline constexpr double kKernelCutoff = 1e-12;

struct OnsagerMatrix {
  Eigen::MatrixXd L;
  Eigen::VectorXd eigenvalues;   // ascending, index 0 is the kernel
  Eigen::MatrixXd eigenvectors;  // columns; column 0 spans constants
};

// L(a)_ij = -omega_ij a_ij (i != j), L(a)_ii = sum_k omega_ki a_ki.
Eigen::MatrixXd onsager_L(const ReversibleChain& chain, const EdgeMatrix& a);
OnsagerMatrix onsager_matrix(const ReversibleChain& chain, const EdgeMatrix& theta);
// Throws NearSingular when more than one eigenvalue falls under the kernel cutoff.
Eigen::MatrixXd pseudo_inverse(const OnsagerMatrix& L);

VertexField mean_zero(const VertexField& phi);

// Potential in mean-zero gauge together with its tangent vector V = L(theta) Phi.
class TangentPotential {
 public:
  TangentPotential(const VertexField& phi, const Eigen::MatrixXd& L);
  const VertexField& phi() const { return phi_; }
  const VertexField& velocity() const { return v_; }

 private:
  VertexField phi_;
  VertexField v_;
};

// Everything the connection and curvature kernels need at one interior point.
class LocalGeometry {
 public:
  LocalGeometry(const ReversibleChain& chain, const MobilityModel& model, const SimplexPoint& p);

  const ReversibleChain& chain() const { return *chain_; }
  const MobilityModel& model() const { return *model_; }
  const SimplexPoint& point() const { return p_; }
  int n() const { return chain_->n(); }
  const ThetaJet& jet() const { return jet_; }
  const EdgeMatrix& theta() const { return jet_.theta; }
  const Eigen::MatrixXd& L() const { return onsager_.L; }
  const Eigen::MatrixXd& R() const { return R_; }
  const OnsagerMatrix& onsager() const { return onsager_; }

  VertexField velocity(const VertexField& phi) const { return onsager_.L * phi; }
  // L(a) for an arbitrary symmetric edge matrix a.
  Eigen::MatrixXd L_of(const EdgeMatrix& a) const { return onsager_L(*chain_, a); }
  EdgeMatrix grad(const VertexField& phi) const { return grad_matrix(*chain_, phi); }

 private:
  const ReversibleChain* chain_;
  const MobilityModel* model_;
  SimplexPoint p_;
  ThetaJet jet_;
  OnsagerMatrix onsager_;
  Eigen::MatrixXd R_;
};

double inner_product(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2);
// 1/2 sum over ordered edges of grad(phi1) grad(phi2) theta.
double inner_product_edges(const LocalGeometry& g, const VertexField& phi1, const VertexField& phi2);
double inner_product(const ReversibleChain& chain, const EdgeMatrix& theta, const VertexField& phi1,
                     const VertexField& phi2);

// Tangent vectors e_k = sqrt(lambda_k) u_k and their potentials u_k / sqrt(lambda_k), k = 1..n-1.
struct Frame {
  std::vector<VertexField> vectors;
  std::vector<VertexField> potentials;
};
Frame orthonormal_frame(const OnsagerMatrix& L);

// Riemannian length of a sampled curve; Simpson on uniform grids with an even number of
// intervals, trapezoid otherwise.
double arc_length(const ReversibleChain& chain, const MobilityModel& model,
                  const std::vector<double>& times, const std::vector<VertexField>& samples);

// Length of the shooting geodesic between two interior points.
double distance(const ReversibleChain& chain, const MobilityModel& model, const SimplexPoint& p0,
                const SimplexPoint& p1);

}  // namespace onsager
