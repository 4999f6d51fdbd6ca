#pragma once

// Evaluable symmetric means and outer functions.
//
// Every evaluation sorts its input ascending before aggregating, so results
// are bit-for-bit invariant under permutation of the arguments.

#include "meanforge/sampling.hpp"
#include "meanforge/vectors.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace meanforge {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_open = true;
  bool upper_open = true;

  /// Throws Error(Domain) unless lower < upper.
  Interval(double lower, double upper, bool lower_open = true, bool upper_open = true);

  static Interval positive(); // (0, inf)
  static Interval real_line();

  bool contains(double x) const noexcept;
  /// True when the interval lies inside (0, inf).
  bool is_positive() const noexcept;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Power mean of order `order`; the geometric mean when |order| < 1e-9.
struct PowerMean {
  double order = 1.0;
  friend bool operator==(const PowerMean&, const PowerMean&) = default;
};

/// k-variable Beta-type mean (k v_1...v_k / (v_1+...+v_k))^(1/(k-1)).
struct BetaMean {
  friend bool operator==(const BetaMean&, const BetaMean&) = default;
};

/// A mean built by a solver (T operator, generalized Beta mean, invariant
/// mean). Immutable once built; `evaluate` receives sorted, validated input.
struct DerivedMean {
  std::string label; // canonical DSL text or a registered name
  Interval domain = Interval::positive();
  std::size_t min_arity = 1;
  std::optional<std::size_t> fixed_arity;
  bool strict = false; // caller assertion: strict and strictly increasing
  std::function<double(std::span<const double>)> evaluate;
};

struct Derived {
  std::shared_ptr<const DerivedMean> handle;
  friend bool operator==(const Derived& a, const Derived& b) {
    return a.handle == b.handle || (a.handle && b.handle && a.handle->label == b.handle->label);
  }
};

class MeanExpr {
public:
  using Variant = std::variant<PowerMean, BetaMean, Derived>;

  /// Throws Error(Domain) on a non-finite order.
  static MeanExpr power(double order);
  static MeanExpr beta();
  static MeanExpr derived(DerivedMean mean);

  const Variant& variant() const noexcept { return value_; }
  std::optional<double> power_order() const noexcept;
  const DerivedMean* derived_handle() const noexcept;

  std::size_t min_arity() const noexcept;
  std::optional<std::size_t> fixed_arity() const noexcept;
  bool is_strict() const noexcept;
  bool requires_positive() const noexcept;

  double operator()(std::span<const double> v) const;

  friend bool operator==(const MeanExpr&, const MeanExpr&) = default;

private:
  explicit MeanExpr(Variant value) : value_(std::move(value)) {}
  Variant value_;
};

/// Generators admitted for quasi-arithmetic aggregates sum g(x_i).
struct Generator {
  enum class Kind { Log, Exp, Pow, Identity };
  Kind kind = Kind::Identity;
  double exponent = 1.0; // Pow only

  static Generator log() { return {Kind::Log, 1.0}; }
  static Generator exp() { return {Kind::Exp, 1.0}; }
  static Generator pow(double p);
  static Generator identity() { return {Kind::Identity, 1.0}; }

  double operator()(double x) const;
  bool requires_positive() const noexcept { return kind == Kind::Log || kind == Kind::Pow; }

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Continuous symmetric function strictly increasing in each variable.
/// Arity-polymorphic: the arity is that of the argument it is applied to.
class OuterFn {
public:
  enum class Kind { Sum, Product, PowerSum, QuasiArithmetic, StrictMean };

  static OuterFn sum();
  static OuterFn product();
  /// sum x_i^p; requires p > 0.
  static OuterFn power_sum(double p);
  static OuterFn quasi_arithmetic(Generator g);
  /// Only power means of finite order are admitted.
  static OuterFn strict_mean(MeanExpr mean);
  /// Admits a derived mean flagged strict (e.g. an invariant mean). Not
  /// reachable from the DSL.
  static OuterFn invariant(MeanExpr mean);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  const Generator& generator() const noexcept { return generator_; }
  const MeanExpr* mean() const noexcept { return mean_ ? &*mean_ : nullptr; }
  bool requires_positive() const noexcept;

  double operator()(std::span<const double> v) const;

  friend bool operator==(const OuterFn&, const OuterFn&) = default;

private:
  OuterFn() = default;
  Kind kind_ = Kind::Sum;
  double exponent_ = 1.0;
  Generator generator_;
  std::optional<MeanExpr> mean_;
};

double power_mean(double order, std::span<const double> v);
double beta_mean(std::span<const double> v);

double eval_mean(const MeanExpr& m, std::span<const double> v);
double eval_outer(const OuterFn& f, std::span<const double> v);

struct MeanCounterexample {
  RealVector input;
  double value = 0.0;
  std::string violation;
};

struct MeanPropertyReport {
  bool passed = true;
  std::size_t samples_checked = 0;
  std::optional<MeanCounterexample> counterexample;
};

using MeanCandidate = std::function<double(std::span<const double>)>;

/// Samples the plan and checks min(v) <= M(v) <= max(v) and invariance under a
/// random permutation of v. Stops at the first counterexample. Exceptions
/// thrown by the candidate count as violations.
MeanPropertyReport check_mean_property(const MeanCandidate& candidate, const SamplingPlan& plan);
MeanPropertyReport check_mean_property(const MeanExpr& mean, const SamplingPlan& plan);

/// Orders below this magnitude evaluate as the geometric mean.
inline constexpr double kGeometricThreshold = 1e-9;

} // namespace meanforge
