#pragma once

// Random well-formed and malformed meanlang text.

#include "meanforge/sampling.hpp"

#include <array>
#include <string>
#include <string_view>

namespace meanforge::testing {

/// Exponents with short and long shortest-form spellings, both signs.
inline std::string random_order(Sampler& rng) {
  switch (rng.integer(0, 3)) {
  case 0: return std::to_string(rng.integer(-6, 6));
  case 1: return std::to_string(rng.integer(-40, 40)) + "." + std::to_string(rng.integer(0, 99));
  case 2: return std::to_string(rng.uniform(-8, 8));
  default: return std::to_string(rng.integer(1, 9)) + "e" + std::to_string(rng.integer(-3, 2));
  }
}

inline std::string random_positive(Sampler& rng) {
  return rng.unit() < 0.5 ? std::to_string(rng.integer(1, 7)) : std::to_string(rng.uniform(0.1, 9));
}

std::string random_outer_text(Sampler& rng, int depth);

inline std::string random_mean_text(Sampler& rng, int depth) {
  const auto pick = rng.integer(0, depth > 0 ? 3 : 2);
  if (pick <= 1) return "P[" + random_order(rng) + "]";
  if (pick == 2) return "B";
  return "beta{S=" + random_mean_text(rng, depth - 1) + "; mu=" + random_outer_text(rng, depth - 1) + "}";
}

inline std::string random_outer_text(Sampler& rng, int depth) {
  switch (rng.integer(0, 7)) {
  case 0: return "sum";
  case 1: return "prod";
  case 2: return "powsum[" + random_positive(rng) + "]";
  case 3: return "qa[log]";
  case 4: return "qa[exp]";
  case 5: return "qa[id]";
  case 6: return "qa[pow[" + random_positive(rng) + "]]";
  default: return "mean[P[" + random_order(rng) + "]]";
  }
  (void)depth;
}

inline std::string random_list_text(Sampler& rng, std::size_t n, int depth) {
  std::string out = "[";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ",";
    out += random_mean_text(rng, depth);
  }
  return out + "]";
}

inline std::string random_problem_text(Sampler& rng, int depth) {
  const auto n = static_cast<std::size_t>(rng.integer(2, 5));
  const auto m = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(n) - 1));
  return "T{mu=" + random_outer_text(rng, depth) + "; S=" + random_list_text(rng, m, depth) +
         "; M=" + random_list_text(rng, n, depth) + "}";
}

/// Arbitrary character soup biased towards the language's own tokens.
inline std::string random_garbage(Sampler& rng) {
  static constexpr std::array<std::string_view, 30> pieces = {
      "P", "[", "]", "{", "}", ";", ",", "=", "B", "beta", "T", "S", "M", "mu", "sum",
      "prod", "powsum", "qa", "mean", "log", "exp", "pow", "id", "-", "1", "0.5", "e", " ", "x", "1e999"};
  std::string out;
  const auto len = rng.integer(0, 24);
  for (std::int64_t i = 0; i < len; ++i) {
    if (rng.unit() < 0.1) {
      out += static_cast<char>(rng.integer(0, 255));
    } else {
      out += pieces[static_cast<std::size_t>(rng.integer(0, pieces.size() - 1))];
    }
  }
  return out;
}

} // namespace meanforge::testing
