#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace onsager {

enum class ErrorKind {
  DisconnectedGraph,
  DetailedBalanceViolation,
  DegenerateStationary,
  BoundaryPoint,
  NonconvexF,
  UnsupportedVertex,
  NoDivergenceDefined,
  NearSingular,
  StepLeavesSimplex,
  BvpNoConvergence,
  DegeneratePlane,
  EqualComponents,
  InvalidArgument,
};

std::string_view error_name(ErrorKind kind) noexcept;

// Every numerical failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& detail);

}  // namespace onsager
