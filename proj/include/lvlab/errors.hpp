#pragma once

#include <stdexcept>
#include <string>

namespace lvlab {

// Failure categories surfaced verbatim through the C boundary.
enum class Code {
  Ok = 0,
  InvalidArgument,
  DomainError,       // closed-form precondition violated (regime, radicand, ...)
  NonConvergence,    // Newton / fixed-point iteration ran out of budget
  RegimeMismatch,    // operation not defined in the requested parameter regime
  GridMismatch,      // incompatible grids or target outside source domain
  LevelNotCrossed,   // level-set tracker found no crossing
  BudgetExceeded,    // simulation budget exhausted before the estimate settled
  ChainViolation,    // ordered family lost its ordering
  EnvelopeFailure,   // no admissible envelope splice point
  PositivityFailure, // perturbation amplitude could not be made admissible
  StabilityViolation,// state left the invariant box
  SingularSystem,    // pivot breakdown / non-certifiable linear system
  IoError,
  Internal,
};

inline const char* code_name(Code c) {
  switch (c) {
    case Code::Ok: return "ok";
    case Code::InvalidArgument: return "invalid_argument";
    case Code::DomainError: return "domain_error";
    case Code::NonConvergence: return "non_convergence";
    case Code::RegimeMismatch: return "regime_mismatch";
    case Code::GridMismatch: return "grid_mismatch";
    case Code::LevelNotCrossed: return "level_not_crossed";
    case Code::BudgetExceeded: return "budget_exceeded";
    case Code::ChainViolation: return "chain_violation";
    case Code::EnvelopeFailure: return "envelope_failure";
    case Code::PositivityFailure: return "positivity_failure";
    case Code::StabilityViolation: return "stability_violation";
    case Code::SingularSystem: return "singular_system";
    case Code::IoError: return "io_error";
    case Code::Internal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
public:
  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

[[noreturn]] inline void fail(Code code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Code code, const std::string& what) {
  if (!ok) fail(code, what);
}

} // namespace lvlab
