#include "onsager/error.hpp"

namespace onsager {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::DetailedBalanceViolation: return "DetailedBalanceViolation";
    case ErrorKind::DegenerateStationary: return "DegenerateStationary";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::NonconvexF: return "NonconvexF";
    case ErrorKind::UnsupportedVertex: return "UnsupportedVertex";
    case ErrorKind::NoDivergenceDefined: return "NoDivergenceDefined";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::StepLeavesSimplex: return "StepLeavesSimplex";
    case ErrorKind::BvpNoConvergence: return "BvpNoConvergence";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::EqualComponents: return "EqualComponents";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

void raise(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace onsager
