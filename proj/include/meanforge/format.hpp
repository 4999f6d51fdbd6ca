#pragma once

// Canonical text for means, outer functions and problems in the mean DSL.

#include "meanforge/means.hpp"

#include <span>
#include <string>

namespace meanforge {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_number(double x);

std::string format(const MeanExpr& mean);
std::string format(const OuterFn& outer);
std::string format(std::span<const MeanExpr> list);
std::string format_problem(const OuterFn& outer, std::span<const MeanExpr> small,
                           std::span<const MeanExpr> big);

} // namespace meanforge
