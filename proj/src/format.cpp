#include "meanforge/format.hpp"

#include <charconv>
#include <system_error>

namespace meanforge {

std::string format_number(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string format(const MeanExpr& mean) {
  if (auto order = mean.power_order()) return "P[" + format_number(*order) + "]";
  if (const auto* d = mean.derived_handle()) return d->label;
  return "B";
}

namespace {

std::string format_generator(const Generator& g) {
  switch (g.kind) {
  case Generator::Kind::Log: return "log";
  case Generator::Kind::Exp: return "exp";
  case Generator::Kind::Pow: return "pow[" + format_number(g.exponent) + "]";
  case Generator::Kind::Identity: return "id";
  }
  return "id";
}

} // namespace

std::string format(const OuterFn& outer) {
  switch (outer.kind()) {
  case OuterFn::Kind::Sum: return "sum";
  case OuterFn::Kind::Product: return "prod";
  case OuterFn::Kind::PowerSum: return "powsum[" + format_number(outer.exponent()) + "]";
  case OuterFn::Kind::QuasiArithmetic: return "qa[" + format_generator(outer.generator()) + "]";
  case OuterFn::Kind::StrictMean: return "mean[" + format(*outer.mean()) + "]";
  }
  return "sum";
}

std::string format(std::span<const MeanExpr> list) {
  std::string out = "[";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ',';
    out += format(list[i]);
  }
  out += ']';
  return out;
}

std::string format_problem(const OuterFn& outer, std::span<const MeanExpr> small,
                           std::span<const MeanExpr> big) {
  return "T{mu=" + format(outer) + "; S=" + format(small) + "; M=" + format(big) + "}";
}

} // namespace meanforge
