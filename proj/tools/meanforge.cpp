#include "meanforge/checks.hpp"
#include "meanforge/error.hpp"
#include "meanforge/format.hpp"
#include "meanforge/invariance.hpp"
#include "meanforge/meanlang.hpp"
#include "meanforge/pexider.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>

using namespace meanforge;
using json = nlohmann::json;

namespace {

enum Exit : int {
  Ok = 0,
  Failed = 1,
  ParseFailure = 2,
  DomainFailure = 3,
  Hypothesis = 4,
  NoConvergence = 5,
};

struct Config {
  std::string format = "human";
  std::optional<std::string> domain;
  std::optional<std::string> session;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::optional<double> tol;
};

bool json_mode(const Config& c) { return c.format == "json"; }

std::string num(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

std::string vec_text(const RealVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
  return out;
}

json to_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const RealVector& v) {
  json out = json::array();
  for (double x : v) out.push_back(to_json(x));
  return out;
}

void emit(const json& record) { std::cout << record.dump() << '\n'; }

double parse_bound(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || std::isnan(x))
    throw ParseError(ErrorKind::Syntax, 1, 1, {"number"}, "bad domain bound '" + std::string(text) + "'");
  return x;
}

/// "lo,hi" as the open interval (lo, hi).
Interval parse_domain(const std::optional<std::string>& text, Interval fallback) {
  if (!text) return fallback;
  const auto comma = text->find(',');
  if (comma == std::string::npos)
    throw ParseError(ErrorKind::Syntax, 1, 1, {"','"}, "--domain expects lo,hi");
  const std::string_view view(*text);
  return Interval(parse_bound(view.substr(0, comma)), parse_bound(view.substr(comma + 1)));
}

struct Env {
  Interval domain = Interval::positive();
  MeanRegistry registry;
  ParseContext ctx;
};

// Domain default: the positive half-line for point commands, (0, 100) where sampling needs a box.
void setup(Env& env, const Config& c, Interval fallback) {
  env.domain = parse_domain(c.domain, fallback);
  env.ctx.domain = env.domain;
  if (c.tol) env.ctx.solve.tol = *c.tol;
  if (c.session) {
    std::ifstream in(*c.session);
    if (in) load_session(in, env.registry, env.ctx);
  }
  env.ctx.registry = &env.registry;
}

void require_in_domain(const RealVector& v, const Interval& domain) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!domain.contains(v[i]))
      throw Error(ErrorKind::DomainViolation, "entry " + std::to_string(i + 1) + " = " + num(v[i]) +
                                                  " lies outside the domain " + num(domain.lower) + "," +
                                                  num(domain.upper));
}

int exit_code(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) && e.kind() != ErrorKind::DomainViolation) return ParseFailure;
  switch (e.kind()) {
  case ErrorKind::Syntax:
  case ErrorKind::UnknownIdent:
  case ErrorKind::ArityMismatch:
  case ErrorKind::NotStrict: return ParseFailure;
  case ErrorKind::HypothesisViolated: return Hypothesis;
  case ErrorKind::NonConvergence: return NoConvergence;
  default: return DomainFailure;
  }
}

int report_error(const Config& c, const std::string& command, const Error& e) {
  if (json_mode(c)) {
    json out{{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      out["line"] = pe->line();
      out["column"] = pe->column();
      out["expected"] = pe->expected();
    }
    emit({{"kind", "error"}, {"input", command}, {"output", out}});
  } else {
    std::cerr << "meanforge " << command << ": " << e.what() << '\n';
  }
  return exit_code(e);
}

bool starts_with_outer(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return false;
  text.remove_prefix(first);
  std::size_t end = 0;
  while (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_')) ++end;
  const auto word = text.substr(0, end);
  return word == "sum" || word == "prod" || word == "powsum" || word == "qa" || word == "mean";
}

// eval

int cmd_eval(const Config& c, const std::string& expr, const std::string& at) {
  Env env;
  setup(env, c, Interval::positive());
  const RealVector v = parse_vector(at);
  double value = 0.0;
  if (starts_with_outer(expr)) {
    const OuterFn f = parse_outer(expr, env.ctx);
    require_in_domain(v, env.domain);
    value = eval_outer(f, v.values());
  } else {
    const Parsed parsed = parse(expr, env.ctx);
    require_in_domain(v, env.domain);
    if (const auto* spec = std::get_if<ProblemSpec>(&parsed)) {
      value = t_operator(spec->small, spec->big, spec->outer, env.domain, env.ctx.solve)(v.values());
    } else {
      value = eval_mean(std::get<MeanExpr>(parsed), v.values());
    }
  }
  if (json_mode(c)) {
    emit({{"kind", "eval"}, {"input", {{"expr", expr}, {"at", to_json(v)}}}, {"output", to_json(value)}});
  } else {
    std::cout << num(value) << '\n';
  }
  return Ok;
}

// solve

int cmd_solve(const Config& c, const std::string& problem, const std::string& at) {
  Env env;
  setup(env, c, Interval::positive());
  const ProblemSpec spec = parse_problem(problem, env.ctx);
  const RealVector v = parse_vector(at);
  require_in_domain(v, env.domain);
  const PointSolve ps = solve_at(spec.small, spec.big, spec.outer, v, env.ctx.solve);
  const SolveResult& r = ps.result;
  if (json_mode(c)) {
    json out{{"root", to_json(r.root)},
             {"bracket", {to_json(r.bracket_lower), to_json(r.bracket_upper)}},
             {"iterations", r.iterations},
             {"status", to_string(r.status)},
             {"small_values", to_json(ps.small_values)},
             {"big_values", to_json(ps.big_values)}};
    json record{{"kind", "solve"}, {"input", {{"problem", format(spec)}, {"at", to_json(v)}}}, {"output", out}};
    if (r.status != SolveStatus::HypothesisViolated) record["residual"] = to_json(r.relative_residual);
    if (const auto w = r.precondition.witness_index()) record["witness"] = {{"k", *w}};
    emit(record);
  } else {
    std::cout << "problem     " << format(spec) << '\n'
              << "at          " << vec_text(v) << '\n'
              << "status      " << to_string(r.status) << '\n'
              << "root        " << num(r.root) << '\n'
              << "bracket     [" << num(r.bracket_lower) << ", " << num(r.bracket_upper) << "]\n"
              << "residual    " << num(r.residual) << " (relative " << num(r.relative_residual) << ")\n"
              << "iterations  " << r.iterations << '\n';
    if (r.status == SolveStatus::HypothesisViolated) {
      std::cout << "S values    " << vec_text(ps.small_values) << '\n' << "M values    " << vec_text(ps.big_values) << '\n';
      if (const auto w = r.precondition.witness_index()) std::cout << "witness k   " << *w << '\n';
    }
  }
  switch (r.status) {
  case SolveStatus::Converged: return Ok;
  case SolveStatus::HypothesisViolated: return Hypothesis;
  case SolveStatus::MaxIterations: return NoConvergence;
  }
  return Ok;
}

// embed

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

std::vector<std::string> eval_commands(const std::vector<MeanExpr>& small, const std::vector<MeanExpr>& big,
                                       const RealVector& v) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto* list : {&small, &big})
    for (const auto& m : *list)
      if (seen.insert(format(m)).second)
        out.push_back("meanforge eval " + shell_quote(format(m)) + " --at " + vec_text(v));
  return out;
}

int cmd_embed(const Config& c, const std::string& small_text, const std::string& big_text, std::size_t arity) {
  Env env;
  setup(env, c, Interval(0.0, 100.0));
  const auto small = parse_mean_list(small_text, env.ctx);
  const auto big = parse_mean_list(big_text, env.ctx);
  if (!std::isfinite(env.domain.lower) || !std::isfinite(env.domain.upper))
    throw Error(ErrorKind::Domain, "embed samples a bounded domain; pass --domain lo,hi with finite bounds");
  const SamplingPlan plan{env.domain.lower, env.domain.upper, arity, c.samples, c.seed};
  const EmbedReport report = verify_embedding(small, big, plan);

  std::vector<std::string> commands;
  if (report.counterexample) commands = eval_commands(small, big, report.counterexample->input);
  if (json_mode(c)) {
    json record{{"kind", "embed"},
                {"input",
                 {{"S", format(std::span<const MeanExpr>(small))},
                  {"M", format(std::span<const MeanExpr>(big))},
                  {"samples", c.samples},
                  {"seed", c.seed},
                  {"arity", arity}}},
                {"output",
                 {{"verdict", to_string(report.mode)}, {"rule", report.rule}, {"samples_checked", report.samples_checked}}}};
    if (const auto& ce = report.counterexample) {
      record["witness"] = {{"input", to_json(ce->input)},
                           {"S_values", to_json(ce->left_values)},
                           {"M_values", to_json(ce->right_values)},
                           {"minorized", ce->verdict.minorized},
                           {"majorized", ce->verdict.majorized},
                           {"commands", commands}};
      if (const auto k = ce->verdict.witness_index()) record["witness"]["k"] = *k;
    }
    emit(record);
  } else {
    std::cout << "verdict  " << to_string(report.mode) << " (" << report.rule << ", " << report.samples_checked
              << " samples)\n";
    if (const auto& ce = report.counterexample) {
      std::cout << "witness  v = " << vec_text(ce->input) << '\n'
                << "  S(v) = " << vec_text(ce->left_values) << '\n'
                << "  M(v) = " << vec_text(ce->right_values) << '\n';
      if (const auto k = ce->verdict.witness_index()) std::cout << "  first failing k = " << *k << '\n';
      std::cout << "re-run with:\n";
      for (const auto& cmd : commands) std::cout << "  " << cmd << '\n';
    }
  }
  return report.refuted() ? Hypothesis : Ok;
}

// invariant

int cmd_invariant(const Config& c, const std::string& list_text, const std::optional<std::string>& at,
                  const std::optional<std::string>& as_mean) {
  Env env;
  setup(env, c, Interval::positive());
  const auto means = parse_mean_list(list_text, env.ctx);
  GaussOptions gauss;
  if (c.tol) gauss.tol = *c.tol;

  if (as_mean) {
    if (!c.session) throw Error(ErrorKind::Domain, "--as-mean needs --session FILE to store the definition");
    const auto k = invariant_mean(means, env.domain, gauss);
    env.registry.define(*as_mean, k);
    std::ofstream out(*c.session, std::ios::app);
    out << session_definition(*as_mean, means) << '\n';
    if (!out) throw Error(ErrorKind::Domain, "cannot write session file " + *c.session);
    if (json_mode(c)) {
      emit({{"kind", "invariant"},
            {"input", {{"M", format(std::span<const MeanExpr>(means))}, {"as_mean", *as_mean}}},
            {"output", {{"registered", *as_mean}, {"session", *c.session}}}});
    } else {
      std::cout << "registered " << *as_mean << " = " << format(k) << " in " << *c.session << '\n';
    }
    if (!at) return Ok;
  }
  if (!at) throw Error(ErrorKind::Syntax, "invariant needs --at or --as-mean");

  const RealVector v = parse_vector(*at);
  require_in_domain(v, env.domain);
  invariant_mean(means, env.domain, gauss); // validates strictness, domain and arity
  const IterationTrace trace = gauss_iterate(means, v, gauss);
  if (json_mode(c)) {
    emit({{"kind", "invariant"},
          {"input", {{"M", format(std::span<const MeanExpr>(means))}, {"at", to_json(v)}}},
          {"output",
           {{"limit", to_json(trace.limit)},
            {"iterations", trace.iterations},
            {"final_spread", to_json(trace.final_spread)},
            {"converged", trace.converged},
            {"spread_nonincreasing", trace.spread_nonincreasing},
            {"final_iterate", to_json(RealVector(trace.final_iterate))}}},
          {"residual", to_json(trace.final_spread)}});
  } else {
    std::cout << "limit         " << num(trace.limit) << '\n'
              << "iterations    " << trace.iterations << '\n'
              << "final spread  " << num(trace.final_spread) << '\n'
              << "converged     " << (trace.converged ? "yes" : "no") << '\n';
  }
  return trace.converged ? Ok : NoConvergence;
}

// check

int cmd_check(const Config& c, const std::string& suite) {
  const auto results = checks::run_suite(suite, {c.samples, c.seed});
  bool all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    if (json_mode(c)) {
      json record{{"kind", "check"},
                  {"input", {{"suite", r.suite}, {"property", r.property}, {"samples", c.samples}, {"seed", c.seed}}},
                  {"output", {{"status", r.passed ? "pass" : "fail"}, {"samples_checked", r.samples_checked}}}};
      if (r.residual) record["residual"] = to_json(*r.residual);
      if (!r.passed) record["witness"] = {{"input", r.input}, {"detail", r.detail}};
      emit(record);
    } else {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.property << " (" << r.samples_checked
                << " samples";
      if (r.residual) std::cout << ", max residual " << num(*r.residual);
      std::cout << ")\n";
      if (!r.passed) {
        std::cout << "     " << r.detail << '\n';
        if (!r.input.empty()) std::cout << "     input " << vec_text(RealVector(r.input)) << '\n';
      }
    }
  }
  return all_passed ? Ok : Failed;
}

// parse

int cmd_parse(const Config& c, const std::string& text) {
  Env env;
  setup(env, c, Interval::positive());
  std::string kind;
  std::string canonical;
  if (starts_with_outer(text)) {
    kind = "outer";
    canonical = format(parse_outer(text, env.ctx));
  } else {
    const Parsed parsed = parse(text, env.ctx);
    kind = std::holds_alternative<ProblemSpec>(parsed) ? "problem" : "mean";
    canonical = format(parsed);
  }
  if (json_mode(c)) {
    emit({{"kind", "parse"}, {"input", text}, {"output", {{"type", kind}, {"canonical", canonical}}}});
  } else {
    std::cout << canonical << '\n';
  }
  return Ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Means, the Pexider invariance equation and invariant means"};
  app.require_subcommand(1);
  app.fallthrough();

  Config config;
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--domain", config.domain, "Open interval lo,hi for arguments and sampling");
  app.add_option("--session", config.session, "Session file with named means");
  app.add_option("--seed", config.seed, "Sampling seed")->envname("MEANFORGE_SEED");
  app.add_option("--samples", config.samples, "Samples per check")->check(CLI::PositiveNumber);
  app.add_option("--tol", config.tol, "Solver or iteration tolerance")->check(CLI::PositiveNumber);

  std::string expr;
  std::string at;
  auto* eval = app.add_subcommand("eval", "Evaluate a mean, outer function or T operator at a vector");
  eval->add_option("expr", expr, "Mean, outer function or T{...} text")->required();
  eval->add_option("--at", at, "Comma-separated arguments")->required();

  std::string problem;
  auto* solve = app.add_subcommand("solve", "Solve the equation of a T{...} problem at a vector");
  solve->add_option("problem", problem, "T{mu=..; S=[..]; M=[..]}")->required();
  solve->add_option("--at", at, "Comma-separated arguments")->required();

  std::string small_text;
  std::string big_text;
  std::size_t arity = 2;
  auto* embed = app.add_subcommand("embed", "Certify, sample or refute S <| M for mean sequences");
  embed->add_option("S", small_text, "Mean list [..]")->required();
  embed->add_option("M", big_text, "Mean list [..]")->required();
  embed->add_option("--arity", arity, "Length of sampled vectors")->check(CLI::PositiveNumber);

  std::string list_text;
  std::optional<std::string> inv_at;
  std::optional<std::string> as_mean;
  auto* invariant = app.add_subcommand("invariant", "Invariant mean of a mean-type mapping");
  invariant->add_option("M", list_text, "Mean list [..]")->required();
  invariant->add_option("--at", inv_at, "Comma-separated arguments");
  invariant->add_option("--as-mean", as_mean, "Register the invariant mean under NAME in the session");

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "Run randomized property suites");
  check->add_option("--suite", suite, "Suite name")
      ->check(CLI::IsMember({"vectors", "means", "pexider", "invariance", "all"}));

  std::string text;
  auto* parse_cmd = app.add_subcommand("parse", "Parse and print canonical text");
  parse_cmd->add_option("text", text, "Mean, outer function or problem text")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Ok : ParseFailure;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*eval) return cmd_eval(config, expr, at);
    if (*solve) return cmd_solve(config, problem, at);
    if (*embed) return cmd_embed(config, small_text, big_text, arity);
    if (*invariant) return cmd_invariant(config, list_text, inv_at, as_mean);
    if (*check) return cmd_check(config, suite);
    if (*parse_cmd) return cmd_parse(config, text);
  } catch (const Error& e) {
    return report_error(config, command, e);
  }
  return Failed;
}
