#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nls {

enum class ErrorKind {
  InvalidArgument,
  OutsideRegion,
  DivergingIntegral,
  Unattainable,
  NonConvergence,
  SingularJacobian,
  IllConditioned,
  RegionExit,
  BlowUp,
  ConditionViolated,
};

std::string_view to_string(ErrorKind kind);

/// Failure raised by every numerical routine in the library. The kind lets
/// callers (root finders, the CLI) react to a specific condition.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::OutsideRegion: return "outside region";
    case ErrorKind::DivergingIntegral: return "diverging integral";
    case ErrorKind::Unattainable: return "unattainable";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::SingularJacobian: return "singular jacobian";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::RegionExit: return "region exit";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::ConditionViolated: return "condition violated";
  }
  return "unknown";
}

}  // namespace nls
