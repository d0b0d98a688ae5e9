#pragma once

#include <optional>
#include <string>

#include "onsager/curvature.hpp"

namespace onsager {

// Three states on the path 1-2-3 with unit weights on both edges.
bool is_unit_lattice3(const ReversibleChain& chain);

// Partials of log theta_1 (edge 1-2) and log theta_2 (edge 2-3) in the cumulative
// coordinates x1 = p1, x2 = p1 + p2.
struct CdfLogPartials {
  double d1_log_t1, d2_log_t1, d22_log_t1;
  double d1_log_t2, d2_log_t2, d11_log_t2;
};

struct Lattice3Forms {
  double theta1 = 0, theta2 = 0;
  double K12 = 0, R11 = 0, R22 = 0, S = 0;  // sectional formula from chain-rule partials
  std::optional<double> K12_table;          // same formula with tabulated log-partials
  std::optional<double> K12_f_mean;         // closed form for a general f-mean
  std::optional<double> K12_example;        // family-specific closed form
  std::optional<double> R11_example, R22_example, S_example;  // geometric family only
  std::string example;                      // which closed form was evaluated
  bool singular = false;                    // equal neighbouring components: tabulated forms skipped
};

// Chain-rule partials from the analytic p-partials of the mobility.
CdfLogPartials cdf_log_partials(const LocalGeometry& g);
// Tabulated partials for f-means and the geometric mean; EqualComponents when p1 = p2 or p2 = p3
// for f-means.
CdfLogPartials cdf_log_partials_table(const MobilityModel& model, const ReversibleChain& chain,
                                      const SimplexPoint& p);
double k12_from_partials(double theta1, double theta2, const CdfLogPartials& d);

// Closed-form curvatures on the unit three-state lattice.
Lattice3Forms lattice3_closed_forms(const ReversibleChain& chain, const MobilityModel& model,
                                    const SimplexPoint& p);
// Printed closed form for K12; throws EqualComponents where it is singular.
double lattice3_example_k12(const ReversibleChain& chain, const MobilityModel& model,
                            const SimplexPoint& p, std::string* label = nullptr);

// The same quantities through the general Riemann machinery with cumulative tangent vectors
// (1,-1,0) and (0,1,-1).
struct Lattice3General {
  double K12, R11, R22, R12, S;
};
Lattice3General lattice3_general(const LocalGeometry& g);

}  // namespace onsager
