#include "meanforge/error.hpp"
#include "meanforge/means.hpp"

#include <exception>
#include <sstream>
#include <utility>
#include <vector>

namespace meanforge {

namespace {

std::vector<double> permuted(const RealVector& v, Sampler& rng) {
  std::vector<double> out = v.entries();
  for (std::size_t i = out.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i - 1)));
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

} // namespace

MeanPropertyReport check_mean_property(const MeanCandidate& candidate, const SamplingPlan& plan) {
  MeanPropertyReport report;
  Sampler sampler(plan);
  SamplingPlan shuffle_plan = plan;
  shuffle_plan.seed = plan.seed ^ 0x9e3779b97f4a7c15ULL;
  Sampler shuffler(shuffle_plan);

  for (std::size_t i = 0; i < plan.count; ++i) {
    RealVector v = sampler.next();
    double value = 0.0;
    double value_permuted = 0.0;
    const auto perm = permuted(v, shuffler);
    try {
      value = candidate(v.values());
      value_permuted = candidate(perm);
    } catch (const std::exception& e) {
      report.passed = false;
      report.counterexample = MeanCounterexample{v, 0.0, std::string("evaluation failed: ") + e.what()};
      return report;
    }
    ++report.samples_checked;
    std::string violation;
    if (!(value >= v.min())) {
      violation = "value below min(v)";
    } else if (!(value <= v.max())) {
      violation = "value above max(v)";
    } else if (value != value_permuted) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "not symmetric: permuted input gives " << value_permuted;
      violation = msg.str();
    }
    if (!violation.empty()) {
      report.passed = false;
      report.counterexample = MeanCounterexample{std::move(v), value, std::move(violation)};
      return report;
    }
  }
  return report;
}

MeanPropertyReport check_mean_property(const MeanExpr& mean, const SamplingPlan& plan) {
  return check_mean_property([&mean](std::span<const double> v) { return eval_mean(mean, v); }, plan);
}

} // namespace meanforge
