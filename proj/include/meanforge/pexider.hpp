#pragma once

// Solving mu(S_1(v),...,S_m(v), x,...,x) = mu(M_1(v),...,M_n(v)) for x.
//
// When (S_1(v),...,S_m(v)) is embedded in (M_1(v),...,M_n(v)) and mu is
// continuous, symmetric and strictly increasing in each variable, the equation
// has exactly one root and it lies in [min M_i(v), max M_i(v)]. The function
// v -> x is then a symmetric mean, exposed here as a derived MeanExpr.

#include "meanforge/means.hpp"
#include "meanforge/sampling.hpp"
#include "meanforge/vectors.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace meanforge {

struct SolveOptions {
  /// Bisection stops once the bracket is narrower than tol * max(1, |x|).
  double tol = 1e-12;
  /// Accepted |f(x0) - mu(w)| / max(1e-300, |mu(w)|) for a converged root.
  double residual_tol = 1e-10;
  std::size_t max_iterations = 200;
  /// Embedding precondition slack, relative to max |w_i|.
  double embed_eps = 1e-9;
};

enum class SolveStatus { Converged, MaxIterations, HypothesisViolated };

std::string_view to_string(SolveStatus status) noexcept;

struct SolveResult {
  double root = 0.0;          // NaN when the hypothesis is violated
  double bracket_lower = 0.0; // min(w)
  double bracket_upper = 0.0; // max(w)
  double residual = 0.0;      // |f(root) - mu(w)|
  double relative_residual = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  OrderingVerdict precondition;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Bisection on [min w, max w] for mu(prefix, x, ..., x) = mu(target).
/// Throws Error(Arity) unless prefix.size() < target.size(); domain errors
/// from evaluating mu propagate.
SolveResult solve_scalar(const OuterFn& mu, const RealVector& prefix, const RealVector& target,
                         const SolveOptions& options = {});

/// A single evaluation point of the T operator.
struct PointSolve {
  RealVector small_values;
  RealVector big_values;
  SolveResult result;
};

PointSolve solve_at(std::span<const MeanExpr> small, std::span<const MeanExpr> big, const OuterFn& mu,
                    const RealVector& v, const SolveOptions& options = {});

/// Derived mean whose value at v is the root of the equation above.
/// Evaluation throws Error(HypothesisViolated) or Error(NonConvergence) at
/// points where the solver does not converge. Construction throws
/// Error(ArityMismatch) unless 1 <= |S| < |M| and Error(DomainViolation) when a
/// positive-only mean or outer function meets a domain reaching zero or below.
MeanExpr t_operator(std::vector<MeanExpr> small, std::vector<MeanExpr> big, OuterFn mu,
                    Interval domain = Interval::positive(), SolveOptions options = {});

/// Derived mean S^{mu}: at v of length k >= 2 solves mu(S(v), x, ..., x) = mu(v).
MeanExpr beta_generalized(MeanExpr s, OuterFn mu, Interval domain = Interval::positive(),
                          SolveOptions options = {});

/// Exponent test for power-mean families: (P_a1..P_am) <| (P_b1..P_bn) iff a <| b.
bool power_mean_embedding(const RealVector& alpha, const RealVector& beta);

enum class EvidenceMode { Certified, Sampled, Refuted };

std::string_view to_string(EvidenceMode mode) noexcept;

struct OrderingCounterexample {
  RealVector input;
  RealVector left_values;
  RealVector right_values;
  OrderingVerdict verdict; // exact re-check on the values
};

/// Evidence that a function sequence is embedded in (or majorized by) another
/// for every argument vector.
struct EmbedReport {
  EvidenceMode mode = EvidenceMode::Sampled;
  std::string rule; // "power-exponents", "subsequence" or "sampling"
  std::size_t samples_checked = 0;
  std::optional<OrderingCounterexample> counterexample;
  /// Exponent-vector verdict for all-power-mean families.
  std::optional<OrderingVerdict> certificate;

  bool refuted() const noexcept { return mode == EvidenceMode::Refuted; }
};

/// Function-level S <| M over the plan's box. Certified for all-power-mean
/// families and for S a sub-multiset of M; sampled (a non-proof) otherwise.
EmbedReport verify_embedding(std::span<const MeanExpr> small, std::span<const MeanExpr> big,
                             const SamplingPlan& plan, double eps = 1e-9);

/// Function-level F ordered-majorized by G, same conventions as verify_embedding.
EmbedReport verify_majorization(std::span<const MeanExpr> left, std::span<const MeanExpr> right,
                                const SamplingPlan& plan, double eps = 1e-9);

struct ComparisonCounterexample {
  RealVector input;
  double t = 0.0;      // T_{S,M}(mu)(v)
  double t_star = 0.0; // T_{S*,M*}(mu)(v)
};

struct ComparisonReport {
  bool hypothesis_ok = true;
  std::string failed_hypothesis;
  std::optional<EmbedReport> hypothesis_evidence;
  bool passed = true;
  std::size_t samples_checked = 0;
  double max_excess = 0.0; // max of t_star - t over the samples
  std::optional<ComparisonCounterexample> counterexample;
};

/// Checks T_{S*,M*}(mu) <= T_{S,M}(mu) + tol on the plan, after establishing
/// M* < M, S < S*, |S| = |S*|, S <| M and S* <| M*.
ComparisonReport compare_t(std::span<const MeanExpr> small, std::span<const MeanExpr> big,
                           std::span<const MeanExpr> small_star, std::span<const MeanExpr> big_star,
                           const OuterFn& mu, const SamplingPlan& plan, double tol = 1e-9,
                           const SolveOptions& options = {});

} // namespace meanforge
