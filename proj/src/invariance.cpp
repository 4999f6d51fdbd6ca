#include "meanforge/invariance.hpp"

#include "meanforge/error.hpp"
#include "meanforge/format.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace meanforge {

namespace {

std::pair<double, double> range_of(const std::vector<double>& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return {*lo, *hi};
}

bool collapsed(double lo, double hi, double tol) {
  return hi - lo <= tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
}

} // namespace

IterationTrace gauss_iterate(std::span<const MeanExpr> means, const RealVector& v, const GaussOptions& options) {
  if (means.size() != v.size()) {
    std::ostringstream msg;
    msg << "mean-type mapping has " << means.size() << " means but the vector has " << v.size() << " entries";
    throw Error(ErrorKind::Arity, msg.str());
  }
  IterationTrace trace;
  for (const auto& m : means) {
    if (!m.is_strict()) throw Error(ErrorKind::NotStrict, format(m) + " is not asserted strict");
    if (m.derived_handle()) trace.strictness_asserted = true;
  }

  std::vector<double> x = v.entries();
  std::vector<double> next(x.size());
  auto [lo, hi] = range_of(x);
  while (!collapsed(lo, hi, options.tol)) {
    if (trace.iterations >= options.max_iterations) break;
    for (std::size_t i = 0; i < means.size(); ++i) next[i] = eval_mean(means[i], x);
    const auto [nlo, nhi] = range_of(next);
    if (nlo < lo || nhi > hi) trace.spread_nonincreasing = false;
    x.swap(next);
    lo = nlo;
    hi = nhi;
    ++trace.iterations;
  }
  trace.converged = collapsed(lo, hi, options.tol);
  trace.final_spread = hi - lo;
  trace.limit = std::clamp(lo + (hi - lo) / 2, v.min(), v.max());
  trace.final_iterate = std::move(x);
  return trace;
}

MeanExpr invariant_mean(std::vector<MeanExpr> means, Interval domain, GaussOptions options) {
  if (means.empty()) throw Error(ErrorKind::Arity, "invariant mean needs at least one mean");
  std::size_t min_arity = 1;
  for (const auto& m : means) {
    if (!m.is_strict()) throw Error(ErrorKind::NotStrict, format(m) + " is not asserted strict");
    if (m.requires_positive() && !domain.is_positive())
      throw Error(ErrorKind::DomainViolation,
                  format(m) + " needs positive arguments but the domain reaches zero or below");
    min_arity = std::max(min_arity, m.min_arity());
    if (auto f = m.fixed_arity(); f && *f != means.size())
      throw Error(ErrorKind::ArityMismatch, format(m) + " has a fixed arity different from the mapping size");
  }
  if (min_arity > means.size())
    throw Error(ErrorKind::ArityMismatch, "a mean in the mapping needs more arguments than the mapping has");

  struct State {
    std::vector<MeanExpr> means;
    GaussOptions options;
    std::string label;
  };
  auto state = std::make_shared<const State>(State{means, options, "invariant" + format(means)});

  DerivedMean d;
  d.label = state->label;
  d.domain = domain;
  d.min_arity = means.size();
  d.fixed_arity = means.size();
  d.strict = true;
  d.evaluate = [state](std::span<const double> x) {
    const RealVector v(std::vector<double>(x.begin(), x.end()));
    const auto trace = gauss_iterate(state->means, v, state->options);
    if (!trace.converged) {
      std::ostringstream msg;
      msg << state->label << ": no convergence after " << trace.iterations << " iterations (spread "
          << trace.final_spread << ")";
      throw Error(ErrorKind::NonConvergence, msg.str());
    }
    return trace.limit;
  };
  return MeanExpr::derived(std::move(d));
}

InvarianceReport verify_invariance(const MeanExpr& k, std::span<const MeanExpr> means, const SamplingPlan& plan,
                                   double tol) {
  InvarianceReport report;
  Sampler sampler(plan);
  std::vector<double> mapped(means.size());
  for (std::size_t i = 0; i < plan.count; ++i) {
    const RealVector v = sampler.next();
    for (std::size_t j = 0; j < means.size(); ++j) mapped[j] = eval_mean(means[j], v.values());
    const double kv = eval_mean(k, v.values());
    const double km = eval_mean(k, mapped);
    ++report.samples_checked;
    const double residual = std::abs(km - kv) / std::max(1.0, std::abs(kv));
    report.max_residual = std::max(report.max_residual, residual);
    if (!(residual <= tol)) {
      report.passed = false;
      report.counterexample = InvarianceCounterexample{v, km, kv};
      return report;
    }
  }
  return report;
}

MeanExpr complementary_mean(std::vector<MeanExpr> small, std::vector<MeanExpr> big, Interval domain,
                            GaussOptions gauss, SolveOptions solve) {
  const std::size_t n = big.size();
  const std::string label = "complementary{S=" + format(small) + "; M=" + format(big) + "}";
  auto k = invariant_mean(big, domain, gauss);
  auto t = t_operator(std::move(small), std::move(big), OuterFn::invariant(std::move(k)), domain, solve);

  DerivedMean d;
  d.label = label;
  d.domain = domain;
  d.min_arity = n;
  d.fixed_arity = n;
  d.evaluate = [t = std::move(t)](std::span<const double> x) { return eval_mean(t, x); };
  return MeanExpr::derived(std::move(d));
}

} // namespace meanforge
