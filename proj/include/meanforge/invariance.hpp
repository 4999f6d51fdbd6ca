#pragma once

// Invariant means by Gauss-type iteration of mean-type mappings
// v -> (M_1(v), ..., M_n(v)), and complementary means built on them.

#include "meanforge/means.hpp"
#include "meanforge/pexider.hpp"
#include "meanforge/sampling.hpp"
#include "meanforge/vectors.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace meanforge {

struct GaussOptions {
  /// Stop once max - min of the iterate is at most tol * max(1, |max|).
  double tol = 1e-12;
  std::size_t max_iterations = 10000;
};

struct IterationTrace {
  std::size_t iterations = 0;
  double final_spread = 0.0;
  double limit = 0.0; // midpoint of the final iterate
  bool converged = false;
  /// False if some step widened the iterate; never happens for genuine means.
  bool spread_nonincreasing = true;
  /// True when a derived mean was admitted on its caller-asserted strictness.
  bool strictness_asserted = false;
  std::vector<double> final_iterate;
};

/// Iterates the mapping until the coordinates collapse. Needs |M| = |v|; every
/// M_i must be strict (power and Beta means are, derived means must carry the
/// strict flag). Throws Error(Arity) or Error(NotStrict) otherwise.
IterationTrace gauss_iterate(std::span<const MeanExpr> means, const RealVector& v,
                             const GaussOptions& options = {});

/// The M-invariant mean K as a derived mean of fixed arity |M|. Evaluation
/// throws Error(NonConvergence) where the iteration cap is hit.
MeanExpr invariant_mean(std::vector<MeanExpr> means, Interval domain = Interval::positive(),
                        GaussOptions options = {});

struct InvarianceCounterexample {
  RealVector input;
  double k_of_mapped = 0.0; // K(M_1(v), ..., M_n(v))
  double k_of_input = 0.0;  // K(v)
};

struct InvarianceReport {
  bool passed = true;
  std::size_t samples_checked = 0;
  double max_residual = 0.0; // relative, over the samples checked
  std::optional<InvarianceCounterexample> counterexample;
};

/// Checks |K(M(v)) - K(v)| <= tol * max(1, |K(v)|) on the plan's samples.
InvarianceReport verify_invariance(const MeanExpr& k, std::span<const MeanExpr> means, const SamplingPlan& plan,
                                   double tol);

/// The unique mean T0 with K(S_1(v),...,S_m(v), T0(v),...,T0(v)) = K(v), where
/// K is the M-invariant mean. Fixed arity |M|.
MeanExpr complementary_mean(std::vector<MeanExpr> small, std::vector<MeanExpr> big,
                            Interval domain = Interval::positive(), GaussOptions gauss = {},
                            SolveOptions solve = {});

} // namespace meanforge
