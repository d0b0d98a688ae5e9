#include "onsager/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include "onsager/error.hpp"

namespace onsager {

namespace {

constexpr double kPiFloor = 1e-12;
constexpr double kBalanceTol = 1e-9;

bool connected(const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(Q.rows());
  std::vector<bool> seen(n, false);
  std::queue<int> todo;
  todo.push(0);
  seen[0] = true;
  int count = 1;
  while (!todo.empty()) {
    int i = todo.front();
    todo.pop();
    for (int j = 0; j < n; ++j) {
      if (j == i || seen[j]) continue;
      if (Q(i, j) > 0.0 || Q(j, i) > 0.0) {
        seen[j] = true;
        ++count;
        todo.push(j);
      }
    }
  }
  return count == n;
}

}  // namespace

double ReversibleChain::balance_residual() const {
  double r = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j) r = std::max(r, std::abs(Q_(i, j) * pi_(i) - Q_(j, i) * pi_(j)));
  return r;
}

double ReversibleChain::stationarity_residual() const {
  double r = 0.0;
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j)
      if (j != i) s += Q_(j, i) * pi_(j) - Q_(i, j) * pi_(i);
    r = std::max(r, std::abs(s));
  }
  return r;
}

ReversibleChain build_reversible_chain(const Eigen::MatrixXd& Qin) {
  const int n = static_cast<int>(Qin.rows());
  if (n < 2 || Qin.cols() != n)
    raise(ErrorKind::InvalidArgument, "rate matrix must be square with n >= 2");
  Eigen::MatrixXd Q = Qin;
  for (int i = 0; i < n; ++i) {
    Q(i, i) = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(Q(i, j)) || Q(i, j) < 0.0)
        raise(ErrorKind::InvalidArgument, "rates must be finite and nonnegative");
    }
  }
  if (!connected(Q)) raise(ErrorKind::DisconnectedGraph, "rate graph is not connected");

  // Transposed generator A^T pi = 0, with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd A = Q;
  for (int i = 0; i < n; ++i) A(i, i) = -Q.row(i).sum();
  Eigen::MatrixXd M = A.transpose();
  M.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible())
    raise(ErrorKind::DegenerateStationary, "stationary distribution is not unique");
  Eigen::VectorXd pi = lu.solve(rhs);
  pi /= pi.sum();
  for (int i = 0; i < n; ++i)
    if (!(pi(i) > kPiFloor))
      raise(ErrorKind::DegenerateStationary,
            "stationary entry " + std::to_string(i + 1) + " is not positive");

  ReversibleChain c;
  c.n_ = n;
  c.Q_ = Q;
  c.pi_ = pi;
  Eigen::MatrixXd flux(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flux(i, j) = Q(i, j) * pi(i);
  const double scale = flux.maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(flux(i, j) - flux(j, i)));
  if (worst > kBalanceTol * scale)
    raise(ErrorKind::DetailedBalanceViolation,
          "max |Q_ij pi_i - Q_ji pi_j| = " + std::to_string(worst));

  c.omega_ = 0.5 * (flux + flux.transpose());
  c.omega_.diagonal().setZero();
  c.sqrt_omega_ = c.omega_.cwiseSqrt();
  c.neighbors_.assign(n, {});
  c.edge_index_.assign(static_cast<size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (c.omega_(i, j) > 0.0) {
        const int k = static_cast<int>(c.edges_.size());
        c.edges_.push_back({i, j});
        c.edge_index_[i * n + j] = k;
        c.edge_index_[j * n + i] = k;
        c.neighbors_[i].push_back(j);
        c.neighbors_[j].push_back(i);
      }
    }
  return c;
}

ReversibleChain chain_from_weights(const Eigen::MatrixXd& omega, const Eigen::VectorXd& pi) {
  const int n = static_cast<int>(omega.rows());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) Q(i, j) = omega(i, j) / pi(i);
  return build_reversible_chain(Q);
}

bool is_preset(std::string_view name) { return name == "triangle-reaction" || name == "lattice3"; }

ReversibleChain preset_chain(std::string_view name) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(3, 3);
  if (name == "triangle-reaction") {
    Q(0, 1) = 1.0;
    Q(1, 0) = 2.0;
    Q(1, 2) = 1.0;
    Q(2, 1) = 2.0;
    Q(0, 2) = 1.0;
    Q(2, 0) = 4.0;
  } else if (name == "lattice3") {
    Q(0, 1) = Q(1, 0) = Q(1, 2) = Q(2, 1) = 3.0;
  } else {
    raise(ErrorKind::InvalidArgument, "unknown preset '" + std::string(name) + "'");
  }
  return build_reversible_chain(Q);
}

EdgeField::EdgeField(const ReversibleChain& chain)
    : chain_(&chain), values_(chain.edges().size(), 0.0) {}

EdgeField::EdgeField(const ReversibleChain& chain, std::vector<double> oriented_values)
    : chain_(&chain), values_(std::move(oriented_values)) {
  if (values_.size() != chain.edges().size())
    raise(ErrorKind::InvalidArgument, "edge field size does not match edge count");
}

double EdgeField::operator()(int i, int j) const {
  const int k = chain_->edge_index(i, j);
  if (k < 0) return 0.0;
  return i < j ? values_[k] : -values_[k];
}

void EdgeField::set(int i, int j, double value) {
  const int k = chain_->edge_index(i, j);
  if (k < 0) raise(ErrorKind::InvalidArgument, "pair is not an edge");
  values_[k] = i < j ? value : -value;
}

EdgeMatrix EdgeField::dense() const {
  const int n = chain_->n();
  EdgeMatrix m = EdgeMatrix::Zero(n, n);
  const auto& e = chain_->edges();
  for (size_t k = 0; k < e.size(); ++k) {
    m(e[k].i, e[k].j) = values_[k];
    m(e[k].j, e[k].i) = -values_[k];
  }
  return m;
}

EdgeField grad_omega(const ReversibleChain& chain, const VertexField& phi) {
  std::vector<double> v;
  v.reserve(chain.edges().size());
  for (const Edge& e : chain.edges())
    v.push_back(chain.sqrt_omega()(e.i, e.j) * (phi(e.j) - phi(e.i)));
  return EdgeField(chain, std::move(v));
}

VertexField div_omega(const ReversibleChain& chain, const EdgeField& v) {
  VertexField out = VertexField::Zero(chain.n());
  for (int i = 0; i < chain.n(); ++i)
    for (int j : chain.neighbors()[i]) out(i) += chain.sqrt_omega()(i, j) * v(i, j);
  return out;
}

VertexField laplacian_omega(const ReversibleChain& chain, const VertexField& phi) {
  return div_omega(chain, grad_omega(chain, phi));
}

EdgeMatrix grad_matrix(const ReversibleChain& chain, const VertexField& phi) {
  const int n = chain.n();
  EdgeMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = chain.sqrt_omega()(i, j) * (phi(j) - phi(i));
  return g;
}

VertexField div_matrix(const ReversibleChain& chain, const EdgeMatrix& v) {
  return chain.sqrt_omega().cwiseProduct(v).rowwise().sum();
}

Eigen::MatrixXd weighted_laplacian(const ReversibleChain& chain, const EdgeMatrix& a) {
  Eigen::MatrixXd L = -chain.omega().cwiseProduct(a);
  L.diagonal().setZero();
  L.diagonal() = -L.rowwise().sum();
  return L;
}

}  // namespace onsager
