#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace onsager::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;  // numerical checks and runtime budget
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240531;
};

CriterionResult check_gradient_flow(const SuiteOptions& opts);       // 1
CriterionResult check_dissipation(const SuiteOptions& opts);         // 2
CriterionResult check_connection(const SuiteOptions& opts);          // 3
CriterionResult check_transport(const SuiteOptions& opts);           // 4
CriterionResult check_geodesics(const SuiteOptions& opts);           // 5
CriterionResult check_curvature_routes(const SuiteOptions& opts);    // 6
CriterionResult check_lattice_closed_forms(const SuiteOptions& opts);  // 7
CriterionResult check_sign_laws(const SuiteOptions& opts);           // 8
CriterionResult check_hessian(const SuiteOptions& opts);             // 9

// Runs criteria 1-9 in order, reporting each result as soon as it is available.
std::vector<CriterionResult> run_suite(const SuiteOptions& opts,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

// Prints one line per result to out; on any failure names the failed criteria on err and returns 3.
int report_results(const std::vector<CriterionResult>& results, std::ostream& out, std::ostream& err);

// "PASS [k] name: detail (t s / budget s)"
std::string format_result(const CriterionResult& r);

}  // namespace onsager::cli
