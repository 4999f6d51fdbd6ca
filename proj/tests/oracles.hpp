#pragma once

// Closed-form reference values, written directly from the defining formulas
// and independent of the library's evaluation and solver paths.

#include <cmath>
#include <span>

namespace meanforge::testing {

inline double direct_power_mean(double s, std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  if (s == 0.0) {
    double log_sum = 0.0;
    for (double xi : x) log_sum += std::log(xi);
    return std::exp(log_sum / n);
  }
  double acc = 0.0;
  for (double xi : x) acc += std::pow(xi, s);
  return std::pow(acc / n, 1.0 / s);
}

/// Solution of sum-equation with S = (P0, P2), M = (P-2, P-1, P1, P3).
inline double closed_form_sum(std::span<const double> v) {
  const auto P = [&](double s) { return direct_power_mean(s, v); };
  return (P(-2) + P(-1) + P(1) + P(3) - P(0) - P(2)) / 2;
}

/// Same sequences with the product as outer function.
inline double closed_form_prod(std::span<const double> v) {
  const auto P = [&](double s) { return direct_power_mean(s, v); };
  return std::sqrt(P(-2) * P(-1) * P(1) * P(3) / (P(0) * P(2)));
}

/// (k v_1...v_k / (v_1+...+v_k))^(1/(k-1)) evaluated in logs.
inline double direct_beta_mean(std::span<const double> v) {
  const double k = static_cast<double>(v.size());
  double log_prod = 0.0;
  double sum = 0.0;
  for (double x : v) {
    log_prod += std::log(x);
    sum += x;
  }
  return std::exp((std::log(k) + log_prod - std::log(sum)) / (k - 1));
}

/// Arithmetic-geometric mean by the classical two-term recursion.
inline double agm(double a, double b) {
  for (int i = 0; i < 100 && a != b; ++i) {
    const double next_a = (a + b) / 2;
    const double next_b = std::sqrt(a * b);
    if (next_a == a && next_b == b) break;
    a = next_a;
    b = next_b;
  }
  return (a + b) / 2;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace meanforge::testing
