#include "meanforge/error.hpp"

namespace meanforge {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::Domain: return "domain";
  case ErrorKind::Arity: return "arity";
  case ErrorKind::Syntax: return "syntax";
  case ErrorKind::ArityMismatch: return "arity-mismatch";
  case ErrorKind::DomainViolation: return "domain-violation";
  case ErrorKind::UnknownIdent: return "unknown-ident";
  case ErrorKind::HypothesisViolated: return "hypothesis-violated";
  case ErrorKind::NonConvergence: return "non-convergence";
  case ErrorKind::NotStrict: return "not-strict";
  }
  return "unknown";
}

} // namespace meanforge
