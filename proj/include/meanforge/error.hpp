#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meanforge {

enum class ErrorKind {
  Domain,             // value outside the domain of a mean or outer function
  Arity,              // wrong number of arguments
  Syntax,             // DSL text does not match the grammar
  ArityMismatch,      // problem with |S| >= |M|
  DomainViolation,    // DSL object not admissible on the declared interval
  UnknownIdent,       // DSL identifier not registered
  HypothesisViolated, // embeddability precondition fails at an evaluation point
  NonConvergence,     // iteration cap reached
  NotStrict,          // mean not admitted as strict
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace meanforge
