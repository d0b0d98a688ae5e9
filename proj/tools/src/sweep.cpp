#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "onsager/error.hpp"

namespace onsager::cli {

VertexField sweep_grid_point(int R, int i, int j) {
  const double u = (i + 0.5) / R;
  const double v = (j + 0.5) / R;
  VertexField p(3);
  p << u, (1.0 - u) * v, (1.0 - u) * (1.0 - v);
  return p;
}

SweepRow sweep_point(const ReversibleChain& chain, const MobilityModel& model, const VertexField& p) {
  SweepRow row;
  row.p1 = p(0);
  row.p2 = p(1);
  row.p3 = p(2);
  try {
    const SimplexPoint pt(p);
    const Lattice3Forms f = lattice3_closed_forms(chain, model, pt);
    row.K12 = f.K12;
    row.R11 = f.R11;
    row.R22 = f.R22;
    row.S = f.S;
    // Cumulative coordinates keep the chart metric diagonal, so the differences stay well conditioned.
    VertexField x1(3), x2(3);
    x1 << 1.0, -1.0, 0.0;
    x2 << 0.0, 1.0, -1.0;
    ChartOptions opts;
    opts.basis = Eigen::MatrixXd(3, 2);
    opts.basis << x1, x2;
    const ChartTensor Rt = chart_curvature_oracle(chain, model, pt, opts);
    const double k_chart = contract(Rt, x1, x2, x2, x1);
    row.oracle_residual = std::abs(f.K12 - k_chart) / std::max(std::abs(f.K12), std::abs(k_chart));
    row.status = f.singular ? "example-singular" : "ok";
  } catch (const Error& e) {
    row.K12 = row.R11 = row.R22 = row.S = row.oracle_residual = std::nan("");
    row.status = "error:" + std::string(e.name());
  }
  return row;
}

std::vector<SweepRow> run_sweep(const ReversibleChain& chain, const MobilityModel& model, int R,
                                unsigned threads) {
  if (!is_unit_lattice3(chain))
    raise(ErrorKind::InvalidArgument, "sweep needs the lattice3 chain");
  if (R < 1) raise(ErrorKind::InvalidArgument, "grid resolution must be positive");
  const int total = R * R;
  std::vector<SweepRow> rows(total);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, total);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int k = next++; k < total; k = next++)
      rows[k] = sweep_point(chain, model, sweep_grid_point(R, k / R, k % R));
  };
  if (threads <= 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace onsager::cli
