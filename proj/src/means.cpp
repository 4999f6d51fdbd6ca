#include "meanforge/means.hpp"

#include "meanforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace meanforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

void require_nonempty(std::span<const double> v, const char* what) {
  if (v.empty()) throw Error(ErrorKind::Arity, std::string(what) + ": empty argument");
}

void require_positive(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << what << ": entry " << i << " = " << v[i] << " is not a positive finite number";
      throw Error(ErrorKind::Domain, msg.str());
    }
  }
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << what << ": entry " << i << " is not finite";
      throw Error(ErrorKind::Domain, msg.str());
    }
  }
}

double clamp_to_range(double value, std::span<const double> sorted) {
  return std::clamp(value, sorted.front(), sorted.back());
}

// Input is sorted ascending, positive.
double power_mean_sorted(double order, std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  if (x.front() == x.back()) return x.front();
  if (std::abs(order) < kGeometricThreshold) {
    double log_sum = 0.0;
    for (double xi : x) log_sum += std::log(xi);
    return clamp_to_range(std::exp(log_sum / n), x);
  }
  // Scale by max for positive orders and by min for negative ones so every
  // term (x_i/scale)^order lies in (0, 1].
  const double scale = order > 0.0 ? x.back() : x.front();
  double acc = 0.0;
  for (double xi : x) acc += std::pow(xi / scale, order);
  return clamp_to_range(scale * std::pow(acc / n, 1.0 / order), x);
}

// Input is sorted ascending, positive, size >= 2.
double beta_mean_sorted(std::span<const double> x) {
  if (x.front() == x.back()) return x.front();
  const double k = static_cast<double>(x.size());
  const double scale = x.back();
  double prod = 1.0;
  double sum = 0.0;
  for (double xi : x) {
    prod *= xi / scale;
    sum += xi / scale;
  }
  double value = 0.0;
  if (prod >= std::numeric_limits<double>::min()) {
    value = scale * std::pow(k * prod / sum, 1.0 / (k - 1.0));
  } else {
    double log_prod = 0.0;
    double raw_sum = 0.0;
    for (double xi : x) {
      log_prod += std::log(xi);
      raw_sum += xi;
    }
    value = std::exp((std::log(k) + log_prod - std::log(raw_sum)) / (k - 1.0));
  }
  return clamp_to_range(value, x);
}

void check_arity(const MeanExpr& m, std::size_t k) {
  if (k < m.min_arity()) {
    std::ostringstream msg;
    msg << "mean needs at least " << m.min_arity() << " arguments, got " << k;
    throw Error(ErrorKind::Arity, msg.str());
  }
  if (auto fixed = m.fixed_arity(); fixed && *fixed != k) {
    std::ostringstream msg;
    msg << "mean takes exactly " << *fixed << " arguments, got " << k;
    throw Error(ErrorKind::Arity, msg.str());
  }
}

} // namespace

Interval::Interval(double lo, double hi, bool lo_open, bool hi_open)
    : lower(lo), upper(hi), lower_open(lo_open), upper_open(hi_open) {
  if (!(lower < upper)) throw Error(ErrorKind::Domain, "interval requires lower < upper");
}

Interval Interval::positive() { return Interval(0.0, kInf, true, true); }
Interval Interval::real_line() { return Interval(-kInf, kInf, true, true); }

bool Interval::contains(double x) const noexcept {
  if (!std::isfinite(x)) return false;
  const bool above = lower_open ? x > lower : x >= lower;
  const bool below = upper_open ? x < upper : x <= upper;
  return above && below;
}

bool Interval::is_positive() const noexcept {
  return lower > 0.0 || (lower == 0.0 && lower_open);
}

double power_mean(double order, std::span<const double> v) {
  require_nonempty(v, "power mean");
  if (!std::isfinite(order)) throw Error(ErrorKind::Domain, "power mean order must be finite");
  require_positive(v, "power mean");
  const auto x = sorted_copy(v);
  return power_mean_sorted(order, x);
}

double beta_mean(std::span<const double> v) {
  if (v.size() < 2) throw Error(ErrorKind::Arity, "Beta-type mean needs at least 2 arguments");
  require_positive(v, "Beta-type mean");
  const auto x = sorted_copy(v);
  return beta_mean_sorted(x);
}

MeanExpr MeanExpr::power(double order) {
  if (!std::isfinite(order)) throw Error(ErrorKind::Domain, "power mean order must be finite");
  return MeanExpr(PowerMean{order});
}

MeanExpr MeanExpr::beta() { return MeanExpr(BetaMean{}); }

MeanExpr MeanExpr::derived(DerivedMean mean) {
  if (!mean.evaluate) throw Error(ErrorKind::Domain, "derived mean needs an evaluator");
  return MeanExpr(Derived{std::make_shared<const DerivedMean>(std::move(mean))});
}

std::optional<double> MeanExpr::power_order() const noexcept {
  if (const auto* p = std::get_if<PowerMean>(&value_)) return p->order;
  return std::nullopt;
}

const DerivedMean* MeanExpr::derived_handle() const noexcept {
  if (const auto* d = std::get_if<Derived>(&value_)) return d->handle.get();
  return nullptr;
}

std::size_t MeanExpr::min_arity() const noexcept {
  if (std::holds_alternative<BetaMean>(value_)) return 2;
  if (const auto* d = derived_handle()) return d->min_arity;
  return 1;
}

std::optional<std::size_t> MeanExpr::fixed_arity() const noexcept {
  if (const auto* d = derived_handle()) return d->fixed_arity;
  return std::nullopt;
}

bool MeanExpr::is_strict() const noexcept {
  if (const auto* d = derived_handle()) return d->strict;
  return true;
}

bool MeanExpr::requires_positive() const noexcept {
  if (const auto* d = derived_handle()) return d->domain.is_positive();
  return true;
}

double MeanExpr::operator()(std::span<const double> v) const { return eval_mean(*this, v); }

double eval_mean(const MeanExpr& m, std::span<const double> v) {
  require_nonempty(v, "mean");
  check_arity(m, v.size());
  const auto x = sorted_copy(v);
  return std::visit(
      [&](const auto& alt) -> double {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, PowerMean>) {
          require_positive(x, "power mean");
          return power_mean_sorted(alt.order, x);
        } else if constexpr (std::is_same_v<T, BetaMean>) {
          require_positive(x, "Beta-type mean");
          return beta_mean_sorted(x);
        } else {
          const DerivedMean& d = *alt.handle;
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (!d.domain.contains(x[i])) {
              std::ostringstream msg;
              msg << d.label << ": argument " << x[i] << " outside the mean's domain";
              throw Error(ErrorKind::Domain, msg.str());
            }
          }
          return d.evaluate(x);
        }
      },
      m.variant());
}

Generator Generator::pow(double p) {
  if (!std::isfinite(p) || !(p > 0.0))
    throw Error(ErrorKind::Domain, "pow generator needs a finite exponent p > 0");
  return {Kind::Pow, p};
}

double Generator::operator()(double x) const {
  switch (kind) {
  case Kind::Log: return std::log(x);
  case Kind::Exp: return std::exp(x);
  case Kind::Pow: return std::pow(x, exponent);
  case Kind::Identity: return x;
  }
  return x;
}

OuterFn OuterFn::sum() {
  OuterFn f;
  f.kind_ = Kind::Sum;
  return f;
}

OuterFn OuterFn::product() {
  OuterFn f;
  f.kind_ = Kind::Product;
  return f;
}

OuterFn OuterFn::power_sum(double p) {
  if (!std::isfinite(p) || !(p > 0.0))
    throw Error(ErrorKind::Domain, "powsum needs a finite exponent p > 0");
  OuterFn f;
  f.kind_ = Kind::PowerSum;
  f.exponent_ = p;
  return f;
}

OuterFn OuterFn::quasi_arithmetic(Generator g) {
  if (g.kind == Generator::Kind::Pow) g = Generator::pow(g.exponent);
  OuterFn f;
  f.kind_ = Kind::QuasiArithmetic;
  f.generator_ = g;
  return f;
}

OuterFn OuterFn::strict_mean(MeanExpr mean) {
  if (!mean.power_order())
    throw Error(ErrorKind::NotStrict, "only power means are admitted as strict outer means");
  OuterFn f;
  f.kind_ = Kind::StrictMean;
  f.mean_ = std::move(mean);
  return f;
}

OuterFn OuterFn::invariant(MeanExpr mean) {
  if (!mean.power_order() && !(mean.derived_handle() && mean.is_strict()))
    throw Error(ErrorKind::NotStrict, "outer mean must be a power mean or a strict derived mean");
  OuterFn f;
  f.kind_ = Kind::StrictMean;
  f.mean_ = std::move(mean);
  return f;
}

bool OuterFn::requires_positive() const noexcept {
  switch (kind_) {
  case Kind::Sum: return false;
  case Kind::Product:
  case Kind::PowerSum: return true;
  case Kind::QuasiArithmetic: return generator_.requires_positive();
  case Kind::StrictMean: return mean_->requires_positive();
  }
  return true;
}

double OuterFn::operator()(std::span<const double> v) const { return eval_outer(*this, v); }

double eval_outer(const OuterFn& f, std::span<const double> v) {
  require_nonempty(v, "outer function");
  require_finite(v, "outer function");
  if (f.kind() == OuterFn::Kind::StrictMean) return eval_mean(*f.mean(), v);
  if (f.requires_positive()) require_positive(v, "outer function");

  const auto x = sorted_copy(v);
  double value = 0.0;
  switch (f.kind()) {
  case OuterFn::Kind::Sum:
    for (double xi : x) value += xi;
    break;
  case OuterFn::Kind::Product:
    value = 1.0;
    for (double xi : x) value *= xi;
    break;
  case OuterFn::Kind::PowerSum:
    for (double xi : x) value += std::pow(xi, f.exponent());
    break;
  case OuterFn::Kind::QuasiArithmetic:
    for (double xi : x) value += f.generator()(xi);
    break;
  case OuterFn::Kind::StrictMean:
    break;
  }
  if (!std::isfinite(value)) throw Error(ErrorKind::Domain, "outer function overflowed");
  return value;
}

} // namespace meanforge
