// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "expr_gen.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "meanforge/error.hpp"
#include "meanforge/format.hpp"
#include "meanforge/invariance.hpp"
#include "meanforge/meanlang.hpp"
#include "meanforge/pexider.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef MEANFORGE_CLI
#error "MEANFORGE_CLI must name the meanforge executable"
#endif

using namespace meanforge;
using namespace meanforge::testing;

namespace {

using Clock = std::chrono::steady_clock;
using Vec = std::vector<double>;

struct Outcome {
  bool passed = true;
  std::string note;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& run) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = run();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (!out.passed) ++failures;
  std::ostringstream line;
  line << (out.passed ? "PASS" : "FAIL") << "  AC" << id << "  " << title << "  [" << std::fixed;
  line.precision(ms < 10 ? 3 : 0);
  line << ms << " ms]";
  if (!out.note.empty()) line << "  " << out.note;
  std::cout << line.str() << std::endl;
}

std::vector<MeanExpr> powers(const Vec& orders) {
  std::vector<MeanExpr> out;
  for (double s : orders) out.push_back(MeanExpr::power(s));
  return out;
}

double order(Sampler& rng) {
  return rng.unit() < 0.4 ? static_cast<double>(rng.integer(-5, 5)) : rng.uniform(-5, 5);
}

std::size_t pick(Sampler& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

// Exponent vectors alpha <| beta, both ascending.
std::pair<Vec, Vec> exponent_pair(Sampler& rng, std::size_t n_max) {
  const std::size_t n = pick(rng, 2, n_max);
  const std::size_t m = pick(rng, 1, n - 1);
  Vec beta(n);
  for (double& b : beta) b = order(rng);
  std::sort(beta.begin(), beta.end());
  return {embedded_into(rng, beta, m), beta};
}

Vec point(Sampler& rng, std::size_t k) { return random_entries(rng, k, 0.0, 100.0); }

// 1. Ordering examples.
Outcome ac1() {
  const auto start = Clock::now();
  const RealVector a{3, 15}, b{5, 0, 10}, c{3, 8}, d{5, 6, 7}, e{2, 4, 6, 8};
  const bool ok = is_ordered_minorized(a, b).holds && !is_ordered_majorized(a, b).holds &&
                  is_embedded(c, b).embedded && is_ordered_minorized(d, e).holds &&
                  !is_ordered_majorized(d, e).holds && is_ordered_majorized(d, e).witness == 3u;
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (!ok) return {false, "boolean mismatch"};
  if (ms >= 1.0) return {false, "took " + std::to_string(ms) + " ms"};
  return {};
}

// 2. Duality, reflexivity, transitivity, permutation characterization.
Outcome ac2() {
  Sampler rng({0.0, 100.0, 2, 1, 2002});
  std::size_t violations = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int i = 0; i < 10000; ++i) {
      auto [v, w] = i % 2 ? majorized_pair(rng, n, n, 0.0, 100.0)
                          : std::pair{RealVector(random_entries(rng, n, 0.0, 100.0)),
                                      RealVector(random_entries(rng, n, 0.0, 100.0))};
      if (is_ordered_majorized(v, w).holds != is_ordered_minorized(w, v).holds) ++violations;
      if (!is_ordered_majorized(v, v).holds || !is_ordered_minorized(v, v).holds || !is_embedded(v, v).embedded)
        ++violations;

      // u < v < w built as a chain, plus an unconstrained triple.
      Vec vd = sort_descending(v).entries();
      Vec u;
      for (double x : vd) u.push_back(std::max(x - decrement(rng, x), 1e-3));
      shuffle(u, rng);
      const RealVector ru(u);
      if (is_ordered_majorized(ru, v).holds && is_ordered_majorized(v, w).holds && !is_ordered_majorized(ru, w).holds)
        ++violations;
      const RealVector x(random_entries(rng, n, 0.0, 100.0));
      if (is_ordered_majorized(ru, x).holds && is_ordered_majorized(x, w).holds && !is_ordered_majorized(ru, w).holds)
        ++violations;

      Vec p = v.entries();
      shuffle(p, rng);
      if (i % 3 == 0) p[pick(rng, 0, n - 1)] += 1.0;
      Vec ps = p, vs = v.entries();
      std::sort(ps.begin(), ps.end());
      std::sort(vs.begin(), vs.end());
      if (is_embedded(v, RealVector(p)).embedded != (ps == vs)) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over 5e4 cases"};
}

// 3. Monotone transport.
Outcome ac3() {
  struct Map {
    std::function<double(double)> f;
    bool increasing;
  };
  const std::vector<Map> maps = {{[](double x) { return x * x; }, true},
                                 {[](double x) { return std::log(x); }, true},
                                 {[](double x) { return -x; }, false},
                                 {[](double x) { return 1.0 / x; }, false}};
  Sampler rng({0.0, 100.0, 2, 1, 3003});
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto [v, w] = majorized_pair(rng, pick(rng, 1, 6), pick(rng, 1, 6), 0.0, 100.0);
    const std::size_t n = pick(rng, 1, 6);
    const auto [e, we] = embedded_pair(rng, pick(rng, 1, n), n, 0.0, 100.0);
    for (const auto& m : maps) {
      const RealVector fv = map_vector(m.f, v), fw = map_vector(m.f, w);
      if (!(m.increasing ? is_ordered_majorized(fv, fw) : is_ordered_majorized(fw, fv)).holds) ++violations;
      if (!is_embedded(map_vector(m.f, e), map_vector(m.f, we)).embedded) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over 1e4 pairs x 4 maps"};
}

// 4. Solver contract.
Outcome ac4() {
  const std::vector<OuterFn> outers = {OuterFn::sum(), OuterFn::product(), OuterFn::power_sum(3)};
  Sampler rng({0.0, 100.0, 2, 1, 4004});
  std::size_t violations = 0;
  std::size_t unconverged = 0;
  double worst = 0.0;
  const auto start = Clock::now();
  for (int i = 0; i < 10000; ++i) {
    const auto [alpha, beta] = exponent_pair(rng, 5);
    if (!power_mean_embedding(RealVector(alpha), RealVector(beta))) {
      ++violations;
      continue;
    }
    const OuterFn& mu = outers[static_cast<std::size_t>(i) % outers.size()];
    const Vec v = point(rng, pick(rng, 2, 5));
    const auto ps = solve_at(powers(alpha), powers(beta), mu, RealVector(v));
    if (!ps.result.converged()) {
      ++unconverged;
      continue;
    }
    // Residual recomputed from the direct power-mean formula.
    Vec lhs, rhs;
    for (double a : alpha) lhs.push_back(direct_power_mean(a, v));
    for (double b : beta) rhs.push_back(direct_power_mean(b, v));
    const double x0 = ps.result.root;
    lhs.resize(rhs.size(), x0);
    const double goal = eval_outer(mu, rhs);
    const double res = std::abs(eval_outer(mu, lhs) - goal) / std::abs(goal);
    worst = std::max(worst, res);
    const auto [lo, hi] = std::minmax_element(rhs.begin(), rhs.end());
    if (res > 1e-10 || x0 < *lo * (1 - 1e-15) || x0 > *hi * (1 + 1e-15)) ++violations;
  }
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream note;
  note << violations << " violations, " << unconverged << " unconverged, max relative residual " << worst;
  return {violations == 0 && unconverged == 0 && s < 30, note.str()};
}

// 5. Closed forms and sandwich.
Outcome ac5() {
  const auto small = powers({0, 2});
  const auto big = powers({-2, -1, 1, 3});
  const auto t_sum = t_operator(small, big, OuterFn::sum());
  const auto t_prod = t_operator(small, big, OuterFn::product());
  Sampler rng({0.0, 100.0, 2, 1, 5005});
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t k : {2u, 3u, 5u}) {
    for (int i = 0; i < 1000; ++i) {
      const Vec v = point(rng, k);
      const double a = t_sum(v), b = t_prod(v);
      const double ea = rel_err(a, closed_form_sum(v)), eb = rel_err(b, closed_form_prod(v));
      worst = std::max({worst, ea, eb});
      const double lo = direct_power_mean(-2, v) * (1 - 1e-12);
      const double hi = direct_power_mean(3, v) * (1 + 1e-12);
      if (ea > 1e-9 || eb > 1e-9 || a < lo || a > hi || b < lo || b > hi) ++violations;
    }
  }
  std::ostringstream note;
  note << violations << " violations, max relative error " << worst;
  return {violations == 0, note.str()};
}

// 6. Generalized Beta identity.
Outcome ac6() {
  const auto g = beta_generalized(MeanExpr::power(1), OuterFn::strict_mean(MeanExpr::power(0)));
  Sampler rng({0.0, 100.0, 2, 1, 6006});
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t k : {2u, 3u, 4u, 6u}) {
    for (int i = 0; i < 1000; ++i) {
      const Vec v = point(rng, k);
      const double e = rel_err(g(v), direct_beta_mean(v));
      worst = std::max(worst, e);
      if (e > 1e-10) ++violations;
    }
  }
  std::ostringstream note;
  note << violations << " violations, max relative error " << worst;
  return {violations == 0, note.str()};
}

// 7. Comparability of T for ordered sequences.
Outcome ac7() {
  Sampler rng({0.0, 100.0, 2, 1, 7007});
  std::size_t violations = 0;
  std::size_t hypothesis_failures = 0;
  double worst = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = pick(rng, 2, 4);
    const std::size_t m = pick(rng, 1, n - 1);
    Vec beta_star(n);
    for (double& b : beta_star) b = order(rng);
    std::sort(beta_star.begin(), beta_star.end());
    // M* < M: raise the top exponent, which keeps S <| M for S <| M*.
    Vec beta = beta_star;
    beta.back() += i % 2 ? 3 * rng.unit() : 0.0;
    const Vec a = embedded_into(rng, beta_star, m);
    const Vec b = embedded_into(rng, beta_star, m);
    Vec alpha(m), alpha_star(m);
    for (std::size_t j = 0; j < m; ++j) {
      alpha[j] = std::min(a[j], b[j]);
      alpha_star[j] = std::max(a[j], b[j]);
    }
    for (const OuterFn& mu : {OuterFn::sum(), OuterFn::product()}) {
      const SamplingPlan plan{0.0, 100.0, pick(rng, 2, 5), 5, static_cast<std::uint64_t>(i)};
      const auto r = compare_t(powers(alpha), powers(beta), powers(alpha_star), powers(beta_star), mu, plan, 1e-9);
      if (!r.hypothesis_ok) {
        ++hypothesis_failures;
        continue;
      }
      worst = std::max(worst, r.max_excess);
      if (!r.passed) ++violations;
    }
  }
  std::ostringstream note;
  note << violations << " violations, " << hypothesis_failures << " uncertified, max excess " << worst;
  return {violations == 0 && hypothesis_failures == 0, note.str()};
}

// 8. Invariant means.
Outcome ac8() {
  Sampler rng({0.0, 100.0, 2, 1, 8008});
  std::size_t violations = 0;
  double worst_g = 0.0;
  double worst_c = 0.0;
  const auto ah = invariant_mean(powers({1, -1}));
  for (int i = 0; i < 1000; ++i) {
    const Vec v = point(rng, 2);
    const double e = rel_err(ah(v), std::sqrt(v[0] * v[1]));
    worst_g = std::max(worst_g, e);
    if (e > 1e-10) ++violations;
  }
  // Defining equation of the complementary mean, 10 sequences x 100 samples.
  for (int j = 0; j < 10; ++j) {
    const auto [alpha, beta] = exponent_pair(rng, 3);
    const auto small = powers(alpha), big = powers(beta);
    const auto k = invariant_mean(big);
    const auto t0 = complementary_mean(small, big);
    std::vector<MeanExpr> mapping = small;
    mapping.resize(big.size(), t0);
    const auto r = verify_invariance(k, mapping, SamplingPlan{0.0, 100.0, big.size(), 100, 800u + j}, 1e-8);
    worst_c = std::max(worst_c, r.max_residual);
    if (!r.passed) ++violations;
  }
  // Every pair of orders on a 0.25 grid in [-5, 5].
  std::size_t worst_iter = 0;
  std::size_t pairs = 0;
  const std::vector<Vec> points = {{1e-3, 99.999}, {1, 2}, {50, 50.000001}, {0.5, 80}};
  for (int a = -20; a <= 20; ++a) {
    for (int b = -20; b <= 20; ++b) {
      ++pairs;
      const auto ms = powers({a / 4.0, b / 4.0});
      for (const auto& v : points) {
        const auto trace = gauss_iterate(ms, RealVector(v));
        worst_iter = std::max(worst_iter, trace.iterations);
        if (!trace.converged || trace.iterations > 200) ++violations;
      }
      for (int s = 0; s < 5; ++s) {
        const auto trace = gauss_iterate(ms, RealVector(point(rng, 2)));
        worst_iter = std::max(worst_iter, trace.iterations);
        if (!trace.converged || trace.iterations > 200) ++violations;
      }
    }
  }
  std::ostringstream note;
  note << violations << " violations, G error " << worst_g << ", complementary residual " << worst_c << ", "
       << pairs << " order pairs, max " << worst_iter << " iterations";
  return {violations == 0, note.str()};
}

// 9. Round trip and totality.
Outcome ac9() {
  Sampler rng({0.0, 1.0, 1, 1, 9009});
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string text = i % 2 ? random_problem_text(rng, 2) : random_mean_text(rng, 3);
    const Parsed first = parse(text);
    const std::string printed = format(first);
    if (!(parse(printed) == first) || format(parse(printed)) != printed) ++violations;
  }
  std::size_t rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string text;
    if (i % 2) {
      text = random_garbage(rng);
    } else {
      const auto len = rng.integer(0, 40);
      for (std::int64_t j = 0; j < len; ++j) text += static_cast<char>(rng.integer(0, 255));
    }
    try {
      parse(text);
    } catch (const ParseError& e) {
      ++rejected;
      if (e.line() < 1 || e.column() < 1) ++violations;
    } catch (...) {
      ++violations;
    }
  }
  std::ostringstream note;
  note << violations << " violations, " << rejected << " of 1e5 fuzz inputs rejected with positions";
  return {violations == 0, note.str()};
}

// 10. CLI determinism and runtime.
std::pair<int, std::string> run(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, out};
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome ac10() {
  const std::string cmd = std::string("'") + MEANFORGE_CLI + "' check --suite all --seed 7 --format json";
  const auto start = Clock::now();
  const auto [code_a, out_a] = run(cmd);
  const auto [code_b, out_b] = run(cmd);
  const double s = std::chrono::duration<double>(Clock::now() - start).count() / 2;
  const auto lines = std::count(out_a.begin(), out_a.end(), '\n');
  std::ostringstream note;
  note << lines << " records, exit " << code_a << "/" << code_b << ", " << s << " s per run, "
       << (out_a == out_b ? "byte-identical" : "outputs differ");
  return {code_a == 0 && code_b == 0 && lines > 0 && out_a == out_b && s < 120, note.str()};
}

} // namespace

int main() {
  report(1, "ordering examples reproduce exactly", ac1);
  report(2, "ordering lemma suite on 1e4 cases per length 2..6", ac2);
  report(3, "monotone transport for x^2, log, -x, 1/x", ac3);
  report(4, "solver residual and bracket contract on 1e4 instances", ac4);
  report(5, "closed-form oracles and power-mean sandwich", ac5);
  report(6, "generalized Beta identity for k = 2, 3, 4, 6", ac6);
  report(7, "comparability of T on 1e3 certified instance pairs", ac7);
  report(8, "invariant and complementary means, Gauss convergence", ac8);
  report(9, "text round trip and parser totality", ac9);
  report(10, "CLI determinism and runtime", ac10);
  return failures == 0 ? 0 : 1;
}
