#pragma once

// Text syntax for means, outer functions and problems (whitespace-insensitive):
//
//   mean    := "P" "[" number "]" | "B" | "beta" "{" "S=" mean ";" "mu=" outer "}" | ident
//   outer   := "sum" | "prod" | "powsum" "[" number "]" | "qa" "[" gen "]" | "mean" "[" mean "]"
//   gen     := "log" | "exp" | "pow" "[" number "]" | "id"
//   list    := "[" mean { "," mean } "]"
//   problem := "T" "{" "mu=" outer ";" "S=" list ";" "M=" list "}"
//   number  := [+-] digits [ "." digits ] [ ("e"|"E") [+-] digits ]
//
// Identifiers name means registered at runtime (see MeanRegistry).

#include "meanforge/error.hpp"
#include "meanforge/means.hpp"
#include "meanforge/pexider.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace meanforge {

/// Parse failure with a 1-based position. kind() is Syntax, ArityMismatch,
/// DomainViolation, NotStrict or UnknownIdent.
class ParseError : public Error {
public:
  ParseError(ErrorKind kind, std::size_t line, std::size_t column, std::vector<std::string> expected,
             const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// Named derived means usable as identifiers.
class MeanRegistry {
public:
  /// Registers `mean` under `name`; the stored mean formats as `name`.
  /// Throws Error(Syntax) for a name that is not an identifier or is reserved.
  void define(const std::string& name, const MeanExpr& mean);
  const MeanExpr* find(std::string_view name) const;
  std::vector<std::string> names() const;

private:
  std::map<std::string, MeanExpr, std::less<>> means_;
};

bool is_identifier(std::string_view text) noexcept;
bool is_reserved_word(std::string_view text) noexcept;

struct ParseContext {
  Interval domain = Interval::positive();
  const MeanRegistry* registry = nullptr;
  SolveOptions solve;
};

struct ProblemSpec {
  OuterFn outer;
  std::vector<MeanExpr> big;   // M_1..M_n
  std::vector<MeanExpr> small; // S_1..S_m
  Interval domain = Interval::positive();
  std::optional<std::size_t> arity;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

using Parsed = std::variant<ProblemSpec, MeanExpr>;

/// A problem when the text starts with "T{", otherwise a mean.
Parsed parse(std::string_view text, const ParseContext& context = {});
MeanExpr parse_mean(std::string_view text, const ParseContext& context = {});
OuterFn parse_outer(std::string_view text, const ParseContext& context = {});
std::vector<MeanExpr> parse_mean_list(std::string_view text, const ParseContext& context = {});
ProblemSpec parse_problem(std::string_view text, const ParseContext& context = {});

/// Comma-separated decimals, e.g. "2,8" or "1.5, 3e2".
RealVector parse_vector(std::string_view text);

std::string format(const ProblemSpec& spec);
std::string format(const Parsed& parsed);

/// Session files hold one definition per line: `NAME = invariant[<list>]` or
/// `NAME = <mean>`. Blank lines and lines starting with '#' are skipped.
/// Definitions may refer to names defined on earlier lines.
void load_session(std::istream& in, MeanRegistry& registry, const ParseContext& context = {});
std::string session_definition(const std::string& name, const std::vector<MeanExpr>& invariant_of);

} // namespace meanforge
