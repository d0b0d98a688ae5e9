#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <utility>
#include <vector>

namespace onsager {

using VertexField = Eigen::VectorXd;
// Dense n x n matrix indexed by ordered vertex pairs; entries off the edge set are zero.
using EdgeMatrix = Eigen::MatrixXd;

struct Edge {
  int i;
  int j;  // i < j
};

class ReversibleChain {
 public:
  int n() const { return n_; }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::VectorXd& pi() const { return pi_; }
  const Eigen::MatrixXd& omega() const { return omega_; }
  const Eigen::MatrixXd& sqrt_omega() const { return sqrt_omega_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  bool adjacent(int i, int j) const { return edge_index_[i * n_ + j] >= 0; }
  // Index into edges() for the unordered pair {i, j}, or -1.
  int edge_index(int i, int j) const { return edge_index_[i * n_ + j]; }

  double balance_residual() const;
  double stationarity_residual() const;

 private:
  friend ReversibleChain build_reversible_chain(const Eigen::MatrixXd& Q);
  int n_ = 0;
  Eigen::MatrixXd Q_;
  Eigen::VectorXd pi_;
  Eigen::MatrixXd omega_;
  Eigen::MatrixXd sqrt_omega_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<int> edge_index_;
};

// Antisymmetric function on ordered edges, stored once per unordered edge (oriented i < j).
// Holds a reference to the chain, which must outlive the field.
class EdgeField {
 public:
  EdgeField(const ReversibleChain& chain, std::vector<double> oriented_values);
  explicit EdgeField(const ReversibleChain& chain);

  double operator()(int i, int j) const;
  void set(int i, int j, double value);
  const std::vector<double>& oriented_values() const { return values_; }
  EdgeMatrix dense() const;

 private:
  const ReversibleChain* chain_;
  std::vector<double> values_;
};

ReversibleChain build_reversible_chain(const Eigen::MatrixXd& Q);

// Build Q_ij = omega_ij / pi_i, so the chain has the given weights and invariant law.
ReversibleChain chain_from_weights(const Eigen::MatrixXd& omega, const Eigen::VectorXd& pi);

// "triangle-reaction": Q12=1, Q21=2, Q23=1, Q32=2, Q13=1, Q31=4.
// "lattice3": path 1-2-3 with Q=3 on each direction (uniform pi, unit omega).
ReversibleChain preset_chain(std::string_view name);
bool is_preset(std::string_view name);

EdgeField grad_omega(const ReversibleChain& chain, const VertexField& phi);
VertexField div_omega(const ReversibleChain& chain, const EdgeField& v);
VertexField laplacian_omega(const ReversibleChain& chain, const VertexField& phi);

// Dense forms used by the geometry kernels.
EdgeMatrix grad_matrix(const ReversibleChain& chain, const VertexField& phi);
VertexField div_matrix(const ReversibleChain& chain, const EdgeMatrix& v);

// Weighted Laplacian with edge coefficients a: L_ij = -omega_ij a_ij, L_ii = sum_k omega_ik a_ik.
Eigen::MatrixXd weighted_laplacian(const ReversibleChain& chain, const EdgeMatrix& a);

}  // namespace onsager
