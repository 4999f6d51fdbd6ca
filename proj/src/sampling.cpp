#include "meanforge/sampling.hpp"

#include "meanforge/error.hpp"

#include <algorithm>
#include <vector>

namespace meanforge {

namespace {
constexpr double kNearConstantSpread = 9e-7;
}

Sampler::Sampler(const SamplingPlan& plan) : plan_(plan), engine_(plan.seed) {
  if (!(plan_.lower < plan_.upper)) throw Error(ErrorKind::Domain, "sampling box needs lower < upper");
  if (plan_.arity == 0) throw Error(ErrorKind::Arity, "sampling arity must be positive");
}

double Sampler::unit() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

double Sampler::uniform(double lo, double hi) {
  for (;;) {
    const double x = lo + (hi - lo) * unit();
    if (x > lo && x < hi) return x;
  }
}

std::int64_t Sampler::integer(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

RealVector Sampler::next() {
  const bool near_constant = index_ % 10 == 9;
  ++index_;
  std::vector<double> out(plan_.arity);
  if (near_constant) {
    const double width = plan_.upper - plan_.lower;
    const double spread = std::min(kNearConstantSpread, width / 4);
    const double base = uniform(plan_.lower, plan_.upper - spread);
    for (double& x : out) x = base + spread * unit();
  } else {
    for (double& x : out) x = uniform(plan_.lower, plan_.upper);
  }
  return RealVector(std::move(out));
}

} // namespace meanforge
