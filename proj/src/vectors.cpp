#include "meanforge/vectors.hpp"

#include "meanforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

namespace meanforge {

RealVector::RealVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty())
    throw Error(ErrorKind::Domain, "vector must have at least one entry");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i])) {
      std::ostringstream msg;
      msg << "vector entry " << i << " is not finite";
      throw Error(ErrorKind::Domain, msg.str());
    }
  }
}

RealVector::RealVector(std::initializer_list<double> entries)
    : RealVector(std::vector<double>(entries)) {}

double RealVector::min() const { return *std::min_element(entries_.begin(), entries_.end()); }
double RealVector::max() const { return *std::max_element(entries_.begin(), entries_.end()); }

RealVector sort_ascending(const RealVector& v) {
  std::vector<double> out = v.entries();
  std::sort(out.begin(), out.end());
  return RealVector(std::move(out));
}

RealVector sort_descending(const RealVector& v) {
  std::vector<double> out = v.entries();
  std::sort(out.begin(), out.end(), std::greater<>());
  return RealVector(std::move(out));
}

namespace {

enum class Direction { Ascending, Descending };

std::vector<double> sorted(const RealVector& v, Direction dir) {
  std::vector<double> out = v.entries();
  if (dir == Direction::Ascending)
    std::sort(out.begin(), out.end());
  else
    std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Checks lhs[k] >= rhs[k] - eps (geq) or lhs[k] <= rhs[k] + eps over the
// common prefix of the two sorted sequences.
OrderingCheck compare_prefix(const std::vector<double>& lhs, const std::vector<double>& rhs,
                             bool geq, double eps) {
  const std::size_t len = std::min(lhs.size(), rhs.size());
  for (std::size_t k = 0; k < len; ++k) {
    const bool ok = geq ? lhs[k] >= rhs[k] - eps : lhs[k] <= rhs[k] + eps;
    if (!ok) return {false, k + 1};
  }
  return {true, std::nullopt};
}

OrderingCheck minorized_impl(const RealVector& v, const RealVector& w, double eps) {
  const auto dir = v.size() <= w.size() ? Direction::Ascending : Direction::Descending;
  return compare_prefix(sorted(v, dir), sorted(w, dir), true, eps);
}

OrderingCheck majorized_impl(const RealVector& v, const RealVector& w, double eps) {
  const auto dir = v.size() <= w.size() ? Direction::Descending : Direction::Ascending;
  return compare_prefix(sorted(v, dir), sorted(w, dir), false, eps);
}

OrderingVerdict embedded_impl(const RealVector& v, const RealVector& w, double eps) {
  OrderingVerdict out;
  const auto minor = minorized_impl(v, w, eps);
  const auto major = majorized_impl(v, w, eps);
  out.minorized = minor.holds;
  out.majorized = major.holds;
  out.minorized_witness = minor.witness;
  out.majorized_witness = major.witness;
  out.embedded = v.size() <= w.size() && minor.holds && major.holds;
  return out;
}

} // namespace

OrderingCheck is_ordered_minorized(const RealVector& v, const RealVector& w) {
  return minorized_impl(v, w, 0.0);
}

OrderingCheck is_ordered_majorized(const RealVector& v, const RealVector& w) {
  return majorized_impl(v, w, 0.0);
}

OrderingVerdict is_embedded(const RealVector& v, const RealVector& w) {
  return embedded_impl(v, w, 0.0);
}

OrderingCheck is_ordered_minorized_within(const RealVector& v, const RealVector& w, double eps) {
  return minorized_impl(v, w, eps);
}

OrderingCheck is_ordered_majorized_within(const RealVector& v, const RealVector& w, double eps) {
  return majorized_impl(v, w, eps);
}

OrderingVerdict is_embedded_within(const RealVector& v, const RealVector& w, double eps) {
  return embedded_impl(v, w, eps);
}

RealVector map_vector(const std::function<double(double)>& f, const RealVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double y = 0.0;
    try {
      y = f(v[i]);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "function undefined at entry " << i << " (" << v[i] << "): " << e.what();
      throw Error(ErrorKind::Domain, msg.str());
    }
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "function undefined at entry " << i << " (" << v[i] << ")";
      throw Error(ErrorKind::Domain, msg.str());
    }
    out.push_back(y);
  }
  return RealVector(std::move(out));
}

} // namespace meanforge
