#include "meanforge/checks.hpp"

#include "meanforge/error.hpp"
#include "meanforge/format.hpp"
#include "meanforge/invariance.hpp"
#include "meanforge/means.hpp"
#include "meanforge/pexider.hpp"
#include "meanforge/sampling.hpp"
#include "meanforge/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>
#include <utility>

namespace meanforge::checks {

namespace {

using Vec = std::vector<double>;

class Property {
public:
  Property(std::string suite, std::string name) {
    result_.suite = std::move(suite);
    result_.property = std::move(name);
  }

  void fail(Vec input, std::string detail) {
    if (!result_.passed) return;
    result_.passed = false;
    result_.input = std::move(input);
    result_.detail = std::move(detail);
  }

  void residual(double r) { result_.residual = std::max(result_.residual.value_or(0.0), r); }
  bool failed() const { return !result_.passed; }
  PropertyResult& result() { return result_; }

private:
  PropertyResult result_;
};

using Body = std::function<void(Sampler&, std::size_t, Property&)>;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Suite {
public:
  Suite(std::string name, const CheckOptions& options, std::vector<PropertyResult>& out)
      : name_(std::move(name)), options_(options), out_(out) {}

  void property(const std::string& name, std::size_t samples, const Body& body) {
    Property p(name_, name);
    Sampler rng({0.0, 1.0, 1, samples, mix(options_.seed, salt_++)});
    for (std::size_t i = 0; i < samples && !p.failed(); ++i) {
      try {
        body(rng, i, p);
      } catch (const Error& e) {
        p.fail({}, std::string("unexpected error: ") + e.what());
      }
      ++p.result().samples_checked;
    }
    out_.push_back(std::move(p.result()));
  }

  void property(const std::string& name, const Body& body) { property(name, options_.samples, body); }

private:
  std::string name_;
  CheckOptions options_;
  std::vector<PropertyResult>& out_;
  std::uint64_t salt_ = 0;
};

// Uniform entries with occasional integer ties; every tenth draw near-constant.
Vec draw(Sampler& rng, std::size_t n, double lo, double hi, std::size_t i) {
  Vec out(n);
  if (i % 10 == 9) {
    const double c = rng.uniform(lo, hi);
    for (double& x : out) x = std::clamp(c + 9e-7 * (rng.unit() - 0.5), std::nextafter(lo, hi), std::nextafter(hi, lo));
    return out;
  }
  const bool ties = rng.unit() < 0.3;
  for (double& x : out) x = ties ? lo + static_cast<double>(rng.integer(1, 6)) : rng.uniform(lo, hi);
  return out;
}

void permute(Vec& v, Sampler& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i) - 1))]);
}

double lower_by(Sampler& rng, double x, double lo) {
  if (rng.unit() < 0.3) return x;
  return lo + (x - lo) * (0.05 + 0.95 * rng.unit());
}

// w and v with v ordered majorized by w, arbitrary lengths.
std::pair<Vec, Vec> majorized(Sampler& rng, std::size_t m, std::size_t n, double lo, double hi, std::size_t i) {
  Vec w = draw(rng, n, lo, hi, i);
  Vec v;
  if (m <= n) {
    std::sort(w.begin(), w.end(), std::greater<>());
    for (std::size_t k = 0; k < m; ++k) v.push_back(lower_by(rng, w[k], lo));
  } else {
    std::sort(w.begin(), w.end());
    for (std::size_t k = 0; k < n; ++k) v.push_back(lower_by(rng, w[k], lo));
    for (std::size_t k = n; k < m; ++k) v.push_back(rng.uniform(lo, hi));
  }
  permute(v, rng);
  permute(w, rng);
  return {v, w};
}

// Nondecreasing m-vector with entry j in [w[j], w[n-m+j]] for ascending w.
Vec embedded_in(Sampler& rng, const Vec& w_asc, std::size_t m) {
  const std::size_t n = w_asc.size();
  Vec out;
  double prev = w_asc.front();
  for (std::size_t j = 0; j < m; ++j) {
    const double lo = std::max(w_asc[j], prev);
    const double hi = w_asc[n - m + j];
    const double u = rng.unit();
    const double x = u < 0.25 ? lo : u < 0.5 ? hi : std::clamp(lo + (hi - lo) * rng.unit(), lo, hi);
    out.push_back(x);
    prev = x;
  }
  return out;
}

std::size_t pick(Sampler& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

double random_order(Sampler& rng, double bound) {
  return rng.unit() < 0.4 ? static_cast<double>(rng.integer(static_cast<std::int64_t>(-bound),
                                                             static_cast<std::int64_t>(bound)))
                          : rng.uniform(-bound, bound);
}

std::vector<MeanExpr> powers(const Vec& orders) {
  std::vector<MeanExpr> out;
  for (double s : orders) out.push_back(MeanExpr::power(s));
  return out;
}

// Power-mean sequences S <| M from embedded exponent vectors.
struct Instance {
  Vec alpha;
  Vec beta;
};

Instance embedded_instance(Sampler& rng, std::size_t n_max) {
  const std::size_t n = pick(rng, 2, n_max);
  const std::size_t m = pick(rng, 1, n - 1);
  Vec beta(n);
  for (double& b : beta) b = random_order(rng, 5);
  std::sort(beta.begin(), beta.end());
  Vec alpha = embedded_in(rng, beta, m);
  permute(alpha, rng);
  permute(beta, rng);
  return {alpha, beta};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string describe(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out + "]";
}

const std::vector<OuterFn>& monotone_outers() {
  static const std::vector<OuterFn> outers = {
      OuterFn::sum(),
      OuterFn::product(),
      OuterFn::power_sum(3),
      OuterFn::quasi_arithmetic(Generator::log()),
      OuterFn::quasi_arithmetic(Generator::exp()),
      OuterFn::quasi_arithmetic(Generator::pow(0.5)),
      OuterFn::strict_mean(MeanExpr::power(-2)),
  };
  return outers;
}

// Vector suite.

void vectors_suite(const CheckOptions& options, std::vector<PropertyResult>& out) {
  Suite s("vectors", options, out);
  const double lo = 0.0;
  const double hi = 100.0;

  s.property("duality", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = 2 + i % 5;
    auto [v, w] = rng.unit() < 0.5 ? majorized(rng, n, n, lo, hi, i) : std::pair{draw(rng, n, lo, hi, i),
                                                                                    draw(rng, n, lo, hi, i)};
    const RealVector rv(v), rw(w);
    if (is_ordered_majorized(rv, rw).holds != is_ordered_minorized(rw, rv).holds)
      p.fail(v, "majorized(v,w) != minorized(w,v) for w=" + describe(w));
  });

  s.property("reflexivity", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, 2 + i % 5, lo, hi, i);
    const RealVector rv(v);
    if (!is_ordered_majorized(rv, rv).holds || !is_ordered_minorized(rv, rv).holds || !is_embedded(rv, rv).embedded)
      p.fail(v, "v is not related to itself");
  });

  s.property("transitivity", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = 2 + i % 5;
    Vec u, v, w;
    if (rng.unit() < 0.5) {
      std::tie(v, w) = majorized(rng, n, n, lo, hi, i);
      Vec v_desc = v;
      std::sort(v_desc.begin(), v_desc.end(), std::greater<>());
      for (double x : v_desc) u.push_back(lower_by(rng, x, lo));
      permute(u, rng);
    } else {
      u = draw(rng, n, lo, hi, i);
      v = draw(rng, n, lo, hi, i);
      w = draw(rng, n, lo, hi, i);
    }
    const RealVector ru(u), rv(v), rw(w);
    if (is_ordered_majorized(ru, rv).holds && is_ordered_majorized(rv, rw).holds &&
        !is_ordered_majorized(ru, rw).holds)
      p.fail(u, "u < v < w but not u < w, v=" + describe(v) + " w=" + describe(w));
    if (is_ordered_minorized(rw, rv).holds && is_ordered_minorized(rv, ru).holds &&
        !is_ordered_minorized(rw, ru).holds)
      p.fail(u, "minorization chain w > v > u does not close, v=" + describe(v) + " w=" + describe(w));
  });

  s.property("permutation-characterization", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = 2 + i % 5;
    const Vec v = draw(rng, n, lo, hi, i);
    Vec w = v;
    permute(w, rng);
    const double u = rng.unit();
    if (u < 0.3) w[pick(rng, 0, n - 1)] = rng.uniform(lo, hi);
    else if (u < 0.5) w = draw(rng, n, lo, hi, i);
    const bool same = sort_ascending(RealVector(v)) == sort_ascending(RealVector(w));
    if (is_embedded(RealVector(v), RealVector(w)).embedded != same)
      p.fail(v, "embedded verdict disagrees with sorted equality for w=" + describe(w));
  });

  s.property("symmetric-monotone-comparison", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = 2 + i % 5;
    const auto [v, w] = majorized(rng, n, n, 0.0, 10.0, i);
    for (const auto& f : monotone_outers()) {
      const double fv = eval_outer(f, v);
      const double fw = eval_outer(f, w);
      if (fv > fw + 1e-12 * std::max(1.0, std::abs(fw)))
        p.fail(v, format(f) + "(v) > " + format(f) + "(w) for w=" + describe(w));
    }
  });

  struct Transport {
    std::string name;
    std::function<double(double)> f;
    bool increasing;
  };
  const std::vector<Transport> maps = {
      {"square", [](double x) { return x * x; }, true},
      {"log", [](double x) { return std::log(x); }, true},
      {"negate", [](double x) { return -x; }, false},
      {"reciprocal", [](double x) { return 1.0 / x; }, false},
  };
  s.property("monotone-transport", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t m = pick(rng, 1, 6);
    const std::size_t n = pick(rng, 1, 6);
    const auto [v, w] = majorized(rng, m, n, lo, hi, i);
    Vec w_asc = w;
    std::sort(w_asc.begin(), w_asc.end());
    const std::size_t k = std::min(m, n);
    const Vec e = embedded_in(rng, w_asc, k);
    for (const auto& t : maps) {
      const RealVector fv = map_vector(t.f, RealVector(v));
      const RealVector fw = map_vector(t.f, RealVector(w));
      const bool ok = t.increasing ? is_ordered_majorized(fv, fw).holds : is_ordered_majorized(fw, fv).holds;
      if (!ok) p.fail(v, t.name + " does not transport v < w for w=" + describe(w));
      const RealVector fe = map_vector(t.f, RealVector(e));
      const RealVector fwa = map_vector(t.f, RealVector(w_asc));
      if (!is_embedded(fe, fwa).embedded) p.fail(e, t.name + " does not transport embedding into " + describe(w));
    }
  });

  s.property("sort-is-permutation", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, pick(rng, 1, 8), lo, hi, i);
    const RealVector sorted = sort_ascending(RealVector(v));
    const Vec& sv = sorted.entries();
    if (!std::is_permutation(sv.begin(), sv.end(), v.begin(), v.end()) || !std::is_sorted(sv.begin(), sv.end()))
      p.fail(v, "sort_ascending is not an ascending permutation");
  });
}

// Means suite.

void means_suite(const CheckOptions& options, std::vector<PropertyResult>& out) {
  Suite s("means", options, out);

  s.property("mean-property", [&](Sampler& rng, std::size_t i, Property& p) {
    const MeanExpr m = i % 4 == 3 ? MeanExpr::beta() : MeanExpr::power(random_order(rng, 8));
    const SamplingPlan plan{0.0, 100.0, pick(rng, m.min_arity(), 6), 4, rng.engine()()};
    const auto report = check_mean_property(m, plan);
    if (!report.passed)
      p.fail(report.counterexample->input.entries(), format(m) + ": " + report.counterexample->violation);
  });

  s.property("order-monotonicity", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, pick(rng, 2, 6), 0.0, 100.0, i);
    double a = random_order(rng, 10);
    double b = random_order(rng, 10);
    if (a > b) std::swap(a, b);
    const double pa = power_mean(a, v);
    const double pb = power_mean(b, v);
    if (pa > pb * (1 + 1e-12))
      p.fail(v, "P[" + format_number(a) + "] > P[" + format_number(b) + "]");
    const Vec c(v.size(), v[0]);
    if (rel(power_mean(a, c), v[0]) > 1e-12) p.fail(c, "P[" + format_number(a) + "] not idempotent");
  });

  s.property("continuity-at-zero", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, pick(rng, 2, 6), 0.0, 100.0, i);
    const double g = power_mean(0, v);
    for (double eps : {1e-6, -1e-6}) {
      const double r = std::abs(power_mean(eps, v) - g) / g;
      p.residual(r);
      if (r > 1e-4) p.fail(v, "P[" + format_number(eps) + "] far from P[0]");
    }
  });

  s.property("beta2-is-harmonic", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, 2, 0.0, 100.0, i);
    const double r = std::abs(beta_mean(v) - power_mean(-1, v)) / power_mean(-1, v);
    p.residual(r);
    if (r > 1e-12) p.fail(v, "B differs from P[-1]");
  });

  s.property("outer-strict-monotonicity", [&](Sampler& rng, std::size_t i, Property& p) {
    Vec v = draw(rng, pick(rng, 1, 6), 0.0, 10.0, i);
    const std::size_t k = pick(rng, 0, v.size() - 1);
    for (const auto& f : monotone_outers()) {
      Vec bumped = v;
      bumped[k] += 1e-3 * (1 + rng.unit()) * std::max(1.0, v[k]);
      if (!(eval_outer(f, bumped) > eval_outer(f, v)))
        p.fail(v, format(f) + " does not increase in coordinate " + std::to_string(k + 1));
    }
  });

  s.property("symmetry", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, pick(rng, 2, 6), 0.0, 100.0, i);
    Vec w = v;
    permute(w, rng);
    const MeanExpr m = rng.unit() < 0.25 ? MeanExpr::beta() : MeanExpr::power(random_order(rng, 8));
    if (eval_mean(m, v) != eval_mean(m, w)) p.fail(v, format(m) + " changes under permutation " + describe(w));
    for (const auto& f : monotone_outers())
      if (eval_outer(f, v) != eval_outer(f, w)) p.fail(v, format(f) + " changes under permutation " + describe(w));
  });
}

// Pexider suite.

const std::vector<OuterFn>& solver_outers() {
  static const std::vector<OuterFn> outers = {
      OuterFn::sum(),
      OuterFn::product(),
      OuterFn::power_sum(3),
      OuterFn::quasi_arithmetic(Generator::log()),
      OuterFn::strict_mean(MeanExpr::power(-1)),
  };
  return outers;
}

struct SolvedPoint {
  Vec v;
  std::vector<MeanExpr> small;
  std::vector<MeanExpr> big;
  OuterFn mu;
  PointSolve point;
};

SolvedPoint solved_point(Sampler& rng, std::size_t i) {
  const auto inst = embedded_instance(rng, 5);
  const auto& outers = solver_outers();
  const OuterFn mu = outers[pick(rng, 0, outers.size() - 1)];
  const Vec v = draw(rng, pick(rng, 2, 5), 0.0, 100.0, i);
  auto small = powers(inst.alpha);
  auto big = powers(inst.beta);
  auto point = solve_at(small, big, mu, RealVector(v));
  return {v, std::move(small), std::move(big), mu, std::move(point)};
}

std::string problem_text(const SolvedPoint& sp) { return format_problem(sp.mu, sp.small, sp.big); }

void pexider_suite(const CheckOptions& options, std::vector<PropertyResult>& out) {
  Suite s("pexider", options, out);
  const SolveOptions solve;

  s.property("residual-contract", [&](Sampler& rng, std::size_t i, Property& p) {
    const auto sp = solved_point(rng, i);
    const auto& r = sp.point.result;
    if (!r.converged()) {
      p.fail(sp.v, problem_text(sp) + ": status " + std::string(to_string(r.status)));
      return;
    }
    Vec args = sp.point.small_values.entries();
    args.resize(sp.big.size(), r.root);
    const double goal = eval_outer(sp.mu, sp.point.big_values.values());
    const double res = std::abs(eval_outer(sp.mu, args) - goal) / std::max(std::abs(goal), 1e-300);
    p.residual(res);
    if (res > solve.residual_tol) p.fail(sp.v, problem_text(sp) + ": residual " + format_number(res));
  });

  s.property("bracket-containment", [&](Sampler& rng, std::size_t i, Property& p) {
    const auto sp = solved_point(rng, i);
    const auto& r = sp.point.result;
    if (!(sp.point.big_values.min() <= r.root && r.root <= sp.point.big_values.max()))
      p.fail(sp.v, problem_text(sp) + ": root " + format_number(r.root) + " outside [min M, max M]");
  });

  s.property("t-is-mean", [&](Sampler& rng, std::size_t i, Property& p) {
    const auto sp = solved_point(rng, i);
    const double x = sp.point.result.root;
    const auto [lo, hi] = std::minmax_element(sp.v.begin(), sp.v.end());
    if (!(*lo <= x && x <= *hi)) p.fail(sp.v, problem_text(sp) + ": value " + format_number(x) + " outside [min v, max v]");
  });

  s.property("t-symmetry", [&](Sampler& rng, std::size_t i, Property& p) {
    const auto inst = embedded_instance(rng, 4);
    const auto& outers = solver_outers();
    const auto t = t_operator(powers(inst.alpha), powers(inst.beta), outers[pick(rng, 0, outers.size() - 1)]);
    const Vec v = draw(rng, pick(rng, 2, 5), 0.0, 100.0, i);
    Vec w = v;
    permute(w, rng);
    const double a = t(v);
    const double b = t(w);
    p.residual(rel(a, b));
    if (rel(a, b) > 1e-10) p.fail(v, format(t) + " changes under permutation " + describe(w));
  });

  s.property("uniqueness", [&](Sampler& rng, std::size_t i, Property& p) {
    const auto sp = solved_point(rng, i);
    const double x = sp.point.result.root;
    const double delta = 10 * solve.tol * std::max(1.0, std::abs(x));
    Vec args = sp.point.small_values.entries();
    args.resize(sp.big.size(), x - delta);
    const double below = eval_outer(sp.mu, args);
    std::fill(args.begin() + static_cast<std::ptrdiff_t>(sp.small.size()), args.end(), x + delta);
    const double above = eval_outer(sp.mu, args);
    const double goal = eval_outer(sp.mu, sp.point.big_values.values());
    if (!(below < goal && goal < above)) p.fail(sp.v, problem_text(sp) + ": no sign change around the root");
  });

  const auto small = powers({0, 2});
  const auto big = powers({-2, -1, 1, 3});
  const auto t_sum = t_operator(small, big, OuterFn::sum());
  const auto t_prod = t_operator(small, big, OuterFn::product());
  const auto P = [](double s, const Vec& v) {
    // Direct formula, independent of the library's scaled evaluation.
    const double n = static_cast<double>(v.size());
    double acc = 0.0;
    if (s == 0) {
      for (double x : v) acc += std::log(x);
      return std::exp(acc / n);
    }
    for (double x : v) acc += std::pow(x, s);
    return std::pow(acc / n, 1.0 / s);
  };

  s.property("closed-form-sum", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t ks[] = {2, 3, 5};
    const Vec v = draw(rng, ks[i % 3], 0.0, 100.0, i);
    const double oracle = (P(-2, v) + P(-1, v) + P(1, v) + P(3, v) - P(0, v) - P(2, v)) / 2;
    const double r = std::abs(t_sum(v) - oracle) / oracle;
    p.residual(r);
    if (r > 1e-9) p.fail(v, "sum form differs from closed form " + format_number(oracle));
  });

  s.property("closed-form-prod", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t ks[] = {2, 3, 5};
    const Vec v = draw(rng, ks[i % 3], 0.0, 100.0, i);
    const double oracle = std::sqrt(P(-2, v) * P(-1, v) * P(1, v) * P(3, v) / (P(0, v) * P(2, v)));
    const double r = std::abs(t_prod(v) - oracle) / oracle;
    p.residual(r);
    if (r > 1e-9) p.fail(v, "product form differs from closed form " + format_number(oracle));
  });

  s.property("power-sandwich", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, pick(rng, 2, 5), 0.0, 100.0, i);
    const double lo = power_mean(-2, v) * (1 - 1e-12);
    const double hi = power_mean(3, v) * (1 + 1e-12);
    for (const auto* t : {&t_sum, &t_prod}) {
      const double x = (*t)(v);
      if (!(lo <= x && x <= hi)) p.fail(v, format(*t) + " outside [P[-2], P[3]]");
    }
  });

  const auto b_gen = beta_generalized(MeanExpr::power(1), OuterFn::strict_mean(MeanExpr::power(0)));
  s.property("beta-identity", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t ks[] = {2, 3, 4, 6};
    const Vec v = draw(rng, ks[i % 4], 0.0, 100.0, i);
    const double r = std::abs(b_gen(v) - beta_mean(v)) / beta_mean(v);
    p.residual(r);
    if (r > 1e-10) p.fail(v, "generalized Beta differs from B");
  });

  s.property("comparability", std::max<std::size_t>(1, options.samples / 10),
             [&](Sampler& rng, std::size_t, Property& p) {
    const std::size_t n = pick(rng, 2, 4);
    const std::size_t m = pick(rng, 1, n - 1);
    Vec beta_star(n);
    for (double& b : beta_star) b = random_order(rng, 5);
    std::sort(beta_star.begin(), beta_star.end());
    Vec beta = beta_star;
    if (rng.unit() < 0.5) beta.back() += 3 * rng.unit();
    const Vec a = embedded_in(rng, beta_star, m);
    const Vec b = embedded_in(rng, beta_star, m);
    Vec alpha(m), alpha_star(m);
    for (std::size_t j = 0; j < m; ++j) {
      alpha[j] = std::min(a[j], b[j]);
      alpha_star[j] = std::max(a[j], b[j]);
    }
    const OuterFn mu = rng.unit() < 0.5 ? OuterFn::sum() : OuterFn::product();
    const SamplingPlan plan{0.0, 100.0, pick(rng, 2, 4), 10, rng.engine()()};
    const auto report = compare_t(powers(alpha), powers(beta), powers(alpha_star), powers(beta_star), mu, plan);
    if (!report.hypothesis_ok) {
      p.fail({}, "constructed instance fails hypothesis " + report.failed_hypothesis);
      return;
    }
    if (!report.passed)
      p.fail(report.counterexample->input.entries(),
             "T* exceeds T by " + format_number(report.counterexample->t_star - report.counterexample->t));
  });
}

// Invariance suite.

void invariance_suite(const CheckOptions& options, std::vector<PropertyResult>& out) {
  Suite s("invariance", options, out);

  const auto ah = invariant_mean(powers({1, -1}));
  s.property("arithmetic-harmonic-gives-geometric", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, 2, 0.0, 100.0, i);
    const double g = std::sqrt(v[0]) * std::sqrt(v[1]);
    const double r = std::abs(ah(v) - g) / g;
    p.residual(r);
    if (r > 1e-10) p.fail(v, "invariant[P[1],P[-1]] differs from sqrt(v1 v2)");
  });

  s.property("complementary-residual", [&](Sampler& rng, std::size_t i, Property& p) {
    const auto inst = embedded_instance(rng, 3);
    const auto big = powers(inst.beta);
    const auto small = powers(inst.alpha);
    const auto k = invariant_mean(big);
    const auto t0 = complementary_mean(small, big);
    const Vec v = draw(rng, big.size(), 0.0, 100.0, i);
    Vec mapped;
    for (const auto& m : small) mapped.push_back(m(v));
    mapped.resize(big.size(), t0(v));
    const double kv = k(v);
    const double r = rel(k(mapped), kv);
    p.residual(r);
    if (r > 1e-8) p.fail(v, format(t0) + ": invariance residual " + format_number(r));
  });

  const auto random_means = [](Sampler& rng, std::size_t n) {
    Vec orders(n);
    for (double& s : orders) s = random_order(rng, 5);
    return powers(orders);
  };

  s.property("spread-nonincreasing", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = pick(rng, 2, 4);
    const Vec v = draw(rng, n, 0.0, 100.0, i);
    const auto ms = random_means(rng, n);
    if (!gauss_iterate(ms, RealVector(v)).spread_nonincreasing)
      p.fail(v, "spread grew for " + format(std::span<const MeanExpr>(ms)));
  });

  s.property("limit-is-mean", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = pick(rng, 2, 4);
    const Vec v = draw(rng, n, 0.0, 100.0, i);
    const auto ms = random_means(rng, n);
    const auto trace = gauss_iterate(ms, RealVector(v));
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (!(*lo <= trace.limit && trace.limit <= *hi))
      p.fail(v, "limit outside [min v, max v] for " + format(std::span<const MeanExpr>(ms)));
  });

  s.property("invariant-symmetry", [&](Sampler& rng, std::size_t i, Property& p) {
    const std::size_t n = pick(rng, 2, 4);
    Vec v = draw(rng, n, 0.0, 100.0, i);
    const auto k = invariant_mean(random_means(rng, n));
    Vec w = v;
    permute(w, rng);
    const double r = rel(k(v), k(w));
    p.residual(r);
    if (r > 1e-10) p.fail(v, format(k) + " changes under permutation " + describe(w));
  });

  s.property("gauss-converges-within-200", [&](Sampler& rng, std::size_t i, Property& p) {
    const Vec v = draw(rng, 2, 0.0, 100.0, i);
    const auto ms = random_means(rng, 2);
    const auto trace = gauss_iterate(ms, RealVector(v));
    if (!trace.converged || trace.iterations > 200)
      p.fail(v, format(std::span<const MeanExpr>(ms)) + " took " + std::to_string(trace.iterations) + " iterations");
  });
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"vectors", "means", "pexider", "invariance"};
  return names;
}

std::vector<PropertyResult> run_suite(std::string_view suite, const CheckOptions& options) {
  using Runner = void (*)(const CheckOptions&, std::vector<PropertyResult>&);
  static const std::pair<std::string_view, Runner> runners[] = {
      {"vectors", vectors_suite}, {"means", means_suite}, {"pexider", pexider_suite}, {"invariance", invariance_suite}};
  std::vector<PropertyResult> out;
  bool known = false;
  for (const auto& [name, run] : runners) {
    if (suite != "all" && suite != name) continue;
    known = true;
    run(options, out);
  }
  if (!known) throw Error(ErrorKind::Domain, "unknown suite '" + std::string(suite) + "'");
  return out;
}

} // namespace meanforge::checks
