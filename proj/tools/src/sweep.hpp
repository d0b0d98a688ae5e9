#pragma once

#include <string>
#include <vector>

#include "onsager/lattice3.hpp"

namespace onsager::cli {

struct SweepRow {
  double p1 = 0, p2 = 0, p3 = 0;
  double K12 = 0, R11 = 0, R22 = 0, S = 0;
  double oracle_residual = 0;  // relative gap between K12 and the chart oracle
  std::string status;          // ok | example-singular | error:<name>
};

// Interior grid point (i, j) of an R x R grid: u = (i+1/2)/R, v = (j+1/2)/R,
// p = (u, (1-u) v, (1-u)(1-v)).
VertexField sweep_grid_point(int R, int i, int j);

SweepRow sweep_point(const ReversibleChain& chain, const MobilityModel& model, const VertexField& p);

// Row-major over (i, j); threads = 0 picks the hardware concurrency.
std::vector<SweepRow> run_sweep(const ReversibleChain& chain, const MobilityModel& model, int R,
                                unsigned threads = 0);

}  // namespace onsager::cli
