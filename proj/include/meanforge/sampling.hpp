#pragma once

#include "meanforge/vectors.hpp"

#include <cstddef>
#include <cstdint>
#include <random>

namespace meanforge {

/// Where and how many random vectors to draw. Entries are uniform on the open
/// box (lower, upper)^arity; every tenth sample is near-constant (spread < 1e-6).
struct SamplingPlan {
  double lower = 0.0;
  double upper = 100.0;
  std::size_t arity = 2;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

/// Deterministic stream of sample vectors for a plan. The mapping from seed to
/// vectors depends only on std::mt19937_64, so output is reproducible across
/// platforms.
class Sampler {
public:
  explicit Sampler(const SamplingPlan& plan);

  RealVector next();
  std::size_t index() const noexcept { return index_; }

  /// Uniform on [0, 1).
  double unit();
  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  std::mt19937_64& engine() noexcept { return engine_; }

private:
  SamplingPlan plan_;
  std::mt19937_64 engine_;
  std::size_t index_ = 0;
};

} // namespace meanforge
