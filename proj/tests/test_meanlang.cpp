#include "expr_gen.hpp"

#include "meanforge/error.hpp"
#include "meanforge/format.hpp"
#include "meanforge/invariance.hpp"
#include "meanforge/meanlang.hpp"

#include <doctest.h>

#include <sstream>

using namespace meanforge;
using namespace meanforge::testing;

namespace {

ErrorKind kind_of(std::string_view text, const ParseContext& ctx = {}) {
  try {
    parse(text, ctx);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error for " << text);
  return ErrorKind::Syntax;
}

} // namespace

TEST_CASE("parse a power mean") {
  const auto m = parse_mean("P[2]");
  CHECK(m == MeanExpr::power(2));
  CHECK(format(m) == "P[2]");
  CHECK(format(parse_mean("  P [ -0.5 ]")) == "P[-0.5]");
  CHECK(format(MeanExpr::power(0)) == "P[0]");
  CHECK(format(MeanExpr::beta()) == "B");
}

TEST_CASE("parse a problem") {
  const auto text = "T{mu=sum; S=[P[0],P[2]]; M=[P[-2],P[-1],P[1],P[3]]}";
  const auto parsed = parse(text);
  REQUIRE(std::holds_alternative<ProblemSpec>(parsed));
  const auto& spec = std::get<ProblemSpec>(parsed);
  CHECK(spec.outer == OuterFn::sum());
  REQUIRE(spec.small.size() == 2);
  REQUIRE(spec.big.size() == 4);
  CHECK(spec.small[1] == MeanExpr::power(2));
  CHECK(spec.big[0] == MeanExpr::power(-2));
  CHECK(format(parsed) == text);
}

TEST_CASE("arity mismatch") {
  CHECK(kind_of("T{mu=sum; S=[P[1],P[2]]; M=[P[0],P[3]]}") == ErrorKind::ArityMismatch);
  CHECK(kind_of("T{mu=sum; S=[P[1],P[2],P[4]]; M=[P[0],P[3]]}") == ErrorKind::ArityMismatch);
}

TEST_CASE("syntax errors carry a position and expectations") {
  try {
    parse("T{mu=sum;\n S=[P[1] M=[P[0],P[3]]}");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.line() == 2);
    CHECK(e.column() == 10);
    CHECK(e.expected() == std::vector<std::string>{"']'"});
  }
  CHECK(kind_of("P[2] P[3]") == ErrorKind::Syntax);
  CHECK(kind_of("") == ErrorKind::Syntax);
  CHECK(kind_of("P[1e999]") == ErrorKind::Syntax);
  CHECK(kind_of("P[nan]") == ErrorKind::Syntax);
  std::string deep;
  for (int i = 0; i < 100; ++i) deep += "beta{S=";
  CHECK(kind_of(deep) == ErrorKind::Syntax);
}

TEST_CASE("domain and strictness violations") {
  ParseContext real;
  real.domain = Interval::real_line();
  CHECK(kind_of("P[0]", real) == ErrorKind::DomainViolation);
  CHECK(kind_of("B", real) == ErrorKind::DomainViolation);
  CHECK(kind_of("P[1]", real) == ErrorKind::DomainViolation);
  CHECK(kind_of("T{mu=prod; S=[P[1]]; M=[P[1],P[1]]}", real) == ErrorKind::DomainViolation);
  CHECK(kind_of("T{mu=powsum[0]; S=[P[1]]; M=[P[1],P[2]]}") == ErrorKind::DomainViolation);
  CHECK(kind_of("T{mu=qa[pow[-1]]; S=[P[1]]; M=[P[1],P[2]]}") == ErrorKind::DomainViolation);
  CHECK(kind_of("T{mu=mean[B]; S=[P[1]]; M=[P[1],P[2]]}") == ErrorKind::NotStrict);
  CHECK(kind_of("Foo") == ErrorKind::UnknownIdent);
}

TEST_CASE("generalized Beta text builds the operator") {
  const auto m = parse_mean("beta{S=P[1]; mu=sum}");
  CHECK(format(m) == "beta{S=P[1]; mu=sum}");
  CHECK(m == beta_generalized(MeanExpr::power(1), OuterFn::sum()));
  CHECK(format(parse_outer("qa[pow[2]]")) == "qa[pow[2]]");
}

TEST_CASE("registry and sessions") {
  MeanRegistry reg;
  std::istringstream in("# demo\n\nK = invariant[P[1],P[-1]]\nA = P[1]\n");
  load_session(in, reg);
  CHECK(reg.names() == std::vector<std::string>{"A", "K"});
  ParseContext ctx;
  ctx.registry = &reg;
  const auto k = parse_mean("K", ctx);
  CHECK(format(k) == "K");
  CHECK(k(std::vector<double>{2, 8}) == doctest::Approx(4).epsilon(1e-12));
  CHECK(format(parse("T{mu=mean[P[0]]; S=[A]; M=[K,P[2]]}", ctx)) == "T{mu=mean[P[0]]; S=[A]; M=[K,P[2]]}");

  CHECK(session_definition("K", {MeanExpr::power(1), MeanExpr::power(-1)}) == "K = invariant[P[1],P[-1]]");
  CHECK_THROWS_AS(reg.define("sum", MeanExpr::power(1)), Error);

  std::istringstream bad("K = P[\n");
  MeanRegistry reg2;
  try {
    load_session(bad, reg2);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("parse_vector") {
  CHECK(parse_vector("2,8") == RealVector{2, 8});
  CHECK(parse_vector(" 1.5, 3e2 ") == RealVector{1.5, 300});
  CHECK_THROWS_AS(parse_vector("1,,2"), ParseError);
  CHECK_THROWS_AS(parse_vector("1,x"), ParseError);
}

TEST_CASE("property: format then parse is the identity") {
  Sampler rng({0.0, 1.0, 1, 1, 17});
  for (int i = 0; i < 2000; ++i) {
    const std::string text = i % 2 ? random_problem_text(rng, 2) : random_mean_text(rng, 3);
    const auto first = parse(text);
    const auto printed = format(first);
    const auto second = parse(printed);
    CHECK(second == first);
    CHECK(format(second) == printed);
  }
}

TEST_CASE("property: the parser is total") {
  Sampler rng({0.0, 1.0, 1, 1, 18});
  for (int i = 0; i < 20000; ++i) {
    const auto text = random_garbage(rng);
    try {
      parse(text);
    } catch (const ParseError& e) {
      CHECK(e.line() >= 1);
      CHECK(e.column() >= 1);
    }
  }
}
