#include "meanforge/pexider.hpp"

#include "meanforge/error.hpp"
#include "meanforge/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace meanforge {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
  case SolveStatus::Converged: return "converged";
  case SolveStatus::MaxIterations: return "max-iterations";
  case SolveStatus::HypothesisViolated: return "hypothesis-violated";
  }
  return "unknown";
}

std::string_view to_string(EvidenceMode mode) noexcept {
  switch (mode) {
  case EvidenceMode::Certified: return "certified";
  case EvidenceMode::Sampled: return "sampled";
  case EvidenceMode::Refuted: return "refuted";
  }
  return "unknown";
}

SolveResult solve_scalar(const OuterFn& mu, const RealVector& prefix, const RealVector& target,
                         const SolveOptions& options) {
  const std::size_t m = prefix.size();
  const std::size_t n = target.size();
  if (m >= n) {
    std::ostringstream msg;
    msg << "prefix length " << m << " must be smaller than target length " << n;
    throw Error(ErrorKind::Arity, msg.str());
  }

  SolveResult result;
  result.bracket_lower = target.min();
  result.bracket_upper = target.max();
  const double scale = std::max(std::abs(result.bracket_lower), std::abs(result.bracket_upper));
  result.precondition = is_embedded_within(prefix, target, options.embed_eps * scale);
  if (!result.precondition.embedded) {
    result.status = SolveStatus::HypothesisViolated;
    result.root = std::numeric_limits<double>::quiet_NaN();
    result.residual = std::numeric_limits<double>::quiet_NaN();
    result.relative_residual = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  const double goal = mu(target.values());
  std::vector<double> args(prefix.begin(), prefix.end());
  args.resize(n);
  const auto f = [&](double x) {
    std::fill(args.begin() + static_cast<std::ptrdiff_t>(m), args.end(), x);
    return mu(args);
  };

  double a = result.bracket_lower;
  double b = result.bracket_upper;
  const double f_range = std::max({std::abs(goal), std::abs(f(a)), std::abs(f(b))});
  const double residual_scale = std::max(f_range, std::numeric_limits<double>::min());

  for (;;) {
    const double x = a + (b - a) / 2;
    const double fx = f(x);
    result.root = x;
    result.residual = std::abs(fx - goal);
    result.relative_residual = result.residual / residual_scale;
    const bool residual_ok = result.relative_residual <= options.residual_tol;
    const bool width_ok = (b - a) <= options.tol * std::max(1.0, std::abs(x));
    const bool stalled = !(x > a && x < b);
    if ((width_ok || stalled) && residual_ok) {
      result.status = SolveStatus::Converged;
      return result;
    }
    if (stalled || result.iterations >= options.max_iterations) {
      result.status = SolveStatus::MaxIterations;
      return result;
    }
    if (fx < goal)
      a = x;
    else
      b = x;
    ++result.iterations;
  }
}

namespace {

RealVector evaluate_all(std::span<const MeanExpr> means, std::span<const double> v) {
  std::vector<double> out;
  out.reserve(means.size());
  for (const auto& m : means) out.push_back(eval_mean(m, v));
  return RealVector(std::move(out));
}

void require_admissible(const MeanExpr& mean, const Interval& domain) {
  if (mean.requires_positive() && !domain.is_positive())
    throw Error(ErrorKind::DomainViolation,
                format(mean) + " needs positive arguments but the domain reaches zero or below");
}

void require_admissible(const OuterFn& mu, const Interval& domain) {
  if (mu.requires_positive() && !domain.is_positive())
    throw Error(ErrorKind::DomainViolation,
                format(mu) + " needs positive arguments but the domain reaches zero or below");
}

struct ArityBounds {
  std::size_t min_arity = 1;
  std::optional<std::size_t> fixed;
};

ArityBounds combined_arity(std::span<const MeanExpr> a, std::span<const MeanExpr> b) {
  ArityBounds out;
  const auto absorb = [&](const MeanExpr& m) {
    out.min_arity = std::max(out.min_arity, m.min_arity());
    if (auto f = m.fixed_arity()) {
      if (out.fixed && *out.fixed != *f)
        throw Error(ErrorKind::ArityMismatch, "means with different fixed arities cannot be combined");
      out.fixed = f;
    }
  };
  for (const auto& m : a) absorb(m);
  for (const auto& m : b) absorb(m);
  if (out.fixed && *out.fixed < out.min_arity)
    throw Error(ErrorKind::ArityMismatch, "fixed arity below the minimum arity of a mean");
  return out;
}

[[noreturn]] void throw_unsolved(const std::string& label, const SolveResult& r) {
  std::ostringstream msg;
  msg << label << ": " << to_string(r.status);
  if (r.status == SolveStatus::HypothesisViolated) {
    msg << " (embedding fails at k=" << r.precondition.witness_index().value_or(0) << ")";
    throw Error(ErrorKind::HypothesisViolated, msg.str());
  }
  msg << " after " << r.iterations << " iterations";
  throw Error(ErrorKind::NonConvergence, msg.str());
}

} // namespace

PointSolve solve_at(std::span<const MeanExpr> small, std::span<const MeanExpr> big, const OuterFn& mu,
                    const RealVector& v, const SolveOptions& options) {
  RealVector s = evaluate_all(small, v.values());
  RealVector w = evaluate_all(big, v.values());
  auto result = solve_scalar(mu, s, w, options);
  return PointSolve{std::move(s), std::move(w), result};
}

MeanExpr t_operator(std::vector<MeanExpr> small, std::vector<MeanExpr> big, OuterFn mu, Interval domain,
                    SolveOptions options) {
  if (small.empty() || small.size() >= big.size()) {
    std::ostringstream msg;
    msg << "need 1 <= |S| < |M|, got |S|=" << small.size() << " and |M|=" << big.size();
    throw Error(ErrorKind::ArityMismatch, msg.str());
  }
  require_admissible(mu, domain);
  for (const auto& m : small) require_admissible(m, domain);
  for (const auto& m : big) require_admissible(m, domain);
  const auto arity = combined_arity(small, big);

  struct State {
    std::vector<MeanExpr> small;
    std::vector<MeanExpr> big;
    OuterFn mu;
    SolveOptions options;
    std::string label;
  };
  auto state = std::make_shared<const State>(
      State{small, big, mu, options, format_problem(mu, small, big)});

  DerivedMean d;
  d.label = state->label;
  d.domain = domain;
  d.min_arity = arity.min_arity;
  d.fixed_arity = arity.fixed;
  d.evaluate = [state](std::span<const double> x) {
    const RealVector v(std::vector<double>(x.begin(), x.end()));
    const auto ps = solve_at(state->small, state->big, state->mu, v, state->options);
    if (!ps.result.converged()) throw_unsolved(state->label, ps.result);
    return ps.result.root;
  };
  return MeanExpr::derived(std::move(d));
}

MeanExpr beta_generalized(MeanExpr s, OuterFn mu, Interval domain, SolveOptions options) {
  require_admissible(mu, domain);
  require_admissible(s, domain);
  if (s.fixed_arity() && *s.fixed_arity() < 2)
    throw Error(ErrorKind::ArityMismatch, "generalized Beta mean needs arity at least 2");

  struct State {
    MeanExpr s;
    OuterFn mu;
    SolveOptions options;
    std::string label;
  };
  auto state = std::make_shared<const State>(
      State{s, mu, options, "beta{S=" + format(s) + "; mu=" + format(mu) + "}"});

  DerivedMean d;
  d.label = state->label;
  d.domain = domain;
  d.min_arity = std::max<std::size_t>(2, s.min_arity());
  d.fixed_arity = s.fixed_arity();
  d.evaluate = [state](std::span<const double> x) {
    const RealVector v(std::vector<double>(x.begin(), x.end()));
    const RealVector prefix{eval_mean(state->s, x)};
    const auto r = solve_scalar(state->mu, prefix, v, state->options);
    if (!r.converged()) throw_unsolved(state->label, r);
    return r.root;
  };
  return MeanExpr::derived(std::move(d));
}

bool power_mean_embedding(const RealVector& alpha, const RealVector& beta) {
  return is_embedded(alpha, beta).embedded;
}

namespace {

enum class Relation { Embedded, Majorized };

bool relation_holds(Relation rel, const RealVector& left, const RealVector& right, double eps) {
  if (rel == Relation::Embedded) return is_embedded_within(left, right, eps).embedded;
  return is_ordered_majorized_within(left, right, eps).holds;
}

std::optional<RealVector> power_orders(std::span<const MeanExpr> means) {
  std::vector<double> out;
  for (const auto& m : means) {
    auto s = m.power_order();
    if (!s) return std::nullopt;
    out.push_back(*s);
  }
  return RealVector(std::move(out));
}

bool is_sub_multiset(std::span<const MeanExpr> small, std::span<const MeanExpr> big) {
  if (small.size() > big.size()) return false;
  std::vector<bool> used(big.size(), false);
  for (const auto& s : small) {
    bool found = false;
    for (std::size_t i = 0; i < big.size() && !found; ++i) {
      if (!used[i] && big[i] == s) {
        used[i] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

double value_scale(const RealVector& a, const RealVector& b) {
  return std::max({std::abs(a.min()), std::abs(a.max()), std::abs(b.min()), std::abs(b.max())});
}

// Returns a counterexample when the relation fails at v (relaxed by eps).
std::optional<OrderingCounterexample> check_point(Relation rel, std::span<const MeanExpr> left,
                                                  std::span<const MeanExpr> right, const RealVector& v,
                                                  double eps) {
  RealVector lv = evaluate_all(left, v.values());
  RealVector rv = evaluate_all(right, v.values());
  if (relation_holds(rel, lv, rv, eps * value_scale(lv, rv))) return std::nullopt;
  auto verdict = is_embedded(lv, rv);
  return OrderingCounterexample{v, std::move(lv), std::move(rv), verdict};
}

EmbedReport verify_relation(Relation rel, std::span<const MeanExpr> left, std::span<const MeanExpr> right,
                            const SamplingPlan& plan, double eps) {
  if (left.empty() || right.empty()) throw Error(ErrorKind::Arity, "mean sequences must be nonempty");
  EmbedReport report;

  const auto alpha = power_orders(left);
  const auto beta = power_orders(right);
  bool search_witness_only = false;
  if (alpha && beta) {
    report.rule = "power-exponents";
    report.certificate = is_embedded(*alpha, *beta);
    const bool holds = rel == Relation::Embedded ? report.certificate->embedded
                                                 : is_ordered_majorized(*alpha, *beta).holds;
    if (holds) {
      report.mode = EvidenceMode::Certified;
      return report;
    }
    // The exponent test fails, so every nonconstant argument is a witness in
    // exact arithmetic; start from a well-spread vector.
    search_witness_only = true;
    std::vector<double> spread(plan.arity);
    for (std::size_t j = 0; j < plan.arity; ++j)
      spread[j] = plan.lower + (plan.upper - plan.lower) * static_cast<double>(j + 1) /
                                   static_cast<double>(plan.arity + 1);
    if (auto cx = check_point(rel, left, right, RealVector(spread), 0.0)) {
      report.mode = EvidenceMode::Refuted;
      report.counterexample = std::move(cx);
      return report;
    }
  } else if (is_sub_multiset(left, right)) {
    report.rule = "subsequence";
    report.mode = EvidenceMode::Certified;
    return report;
  } else {
    report.rule = "sampling";
  }

  Sampler sampler(plan);
  for (std::size_t i = 0; i < plan.count; ++i) {
    const RealVector v = sampler.next();
    ++report.samples_checked;
    if (auto cx = check_point(rel, left, right, v, search_witness_only ? 0.0 : eps)) {
      report.mode = EvidenceMode::Refuted;
      report.counterexample = std::move(cx);
      return report;
    }
  }
  report.mode = EvidenceMode::Sampled;
  return report;
}

} // namespace

EmbedReport verify_embedding(std::span<const MeanExpr> small, std::span<const MeanExpr> big,
                             const SamplingPlan& plan, double eps) {
  return verify_relation(Relation::Embedded, small, big, plan, eps);
}

EmbedReport verify_majorization(std::span<const MeanExpr> left, std::span<const MeanExpr> right,
                                const SamplingPlan& plan, double eps) {
  return verify_relation(Relation::Majorized, left, right, plan, eps);
}

ComparisonReport compare_t(std::span<const MeanExpr> small, std::span<const MeanExpr> big,
                           std::span<const MeanExpr> small_star, std::span<const MeanExpr> big_star,
                           const OuterFn& mu, const SamplingPlan& plan, double tol,
                           const SolveOptions& options) {
  ComparisonReport report;
  const auto fail = [&](std::string what, std::optional<EmbedReport> evidence) {
    report.hypothesis_ok = false;
    report.passed = false;
    report.failed_hypothesis = std::move(what);
    report.hypothesis_evidence = std::move(evidence);
    return report;
  };

  if (small.size() != small_star.size()) return fail("|S| != |S*|", std::nullopt);
  if (big.size() != big_star.size()) return fail("|M| != |M*|", std::nullopt);
  if (auto r = verify_majorization(big_star, big, plan); r.refuted()) return fail("M* < M", r);
  if (auto r = verify_majorization(small, small_star, plan); r.refuted()) return fail("S < S*", r);
  if (auto r = verify_embedding(small, big, plan); r.refuted()) return fail("S <| M", r);
  if (auto r = verify_embedding(small_star, big_star, plan); r.refuted()) return fail("S* <| M*", r);

  Sampler sampler(plan);
  for (std::size_t i = 0; i < plan.count; ++i) {
    const RealVector v = sampler.next();
    const auto a = solve_at(small, big, mu, v, options);
    const auto b = solve_at(small_star, big_star, mu, v, options);
    if (!a.result.converged()) throw_unsolved(format_problem(mu, small, big), a.result);
    if (!b.result.converged()) throw_unsolved(format_problem(mu, small_star, big_star), b.result);
    ++report.samples_checked;
    const double t = a.result.root;
    const double t_star = b.result.root;
    report.max_excess = std::max(report.max_excess, t_star - t);
    if (t_star > t + tol * std::max(1.0, std::abs(t))) {
      report.passed = false;
      report.counterexample = ComparisonCounterexample{v, t, t_star};
      return report;
    }
  }
  return report;
}

} // namespace meanforge
