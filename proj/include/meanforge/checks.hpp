#pragma once

// Randomized property suites over the library, one result per property.
// Output depends only on the options, so equal seeds give equal results.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meanforge::checks {

struct CheckOptions {
  std::size_t samples = 1000; // per property
  std::uint64_t seed = 0;
};

struct PropertyResult {
  std::string suite;
  std::string property;
  bool passed = true;
  std::size_t samples_checked = 0;
  /// Worst relative residual seen, for properties measured against a tolerance.
  std::optional<double> residual;
  /// Offending input and a description, set on the first failure.
  std::vector<double> input;
  std::string detail;
};

/// "vectors", "means", "pexider", "invariance".
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws Error(Domain) for an
/// unknown suite name.
std::vector<PropertyResult> run_suite(std::string_view suite, const CheckOptions& options = {});

} // namespace meanforge::checks
