#pragma once

// Ordering primitives on finite real vectors.
//
// For v of length m and w of length n:
//   ordered minorization  v > w : m <= n: asc(v)[k] >= asc(w)[k], k < m
//                                 m >  n: desc(v)[k] >= desc(w)[k], k < n
//   ordered majorization  v < w : m <= n: desc(v)[k] <= desc(w)[k], k < m
//                                 m >  n: asc(v)[k] <= asc(w)[k], k < n
//   embeddability         v <| w: both of the above and m <= n.
//
// Comparisons are exact. The *_within variants relax each inequality by eps
// and are meant for vectors of computed mean values.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace meanforge {

/// Nonempty vector of finite doubles.
class RealVector {
public:
  /// Throws Error(Domain) on an empty vector or a non-finite entry.
  explicit RealVector(std::vector<double> entries);
  RealVector(std::initializer_list<double> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  double min() const;
  double max() const;

  friend bool operator==(const RealVector&, const RealVector&) = default;

private:
  std::vector<double> entries_;
};

/// Result of a single ordering predicate. `witness` is the 1-based index k of
/// the first failing inequality.
struct OrderingCheck {
  bool holds = true;
  std::optional<std::size_t> witness;

  explicit operator bool() const noexcept { return holds; }
};

struct OrderingVerdict {
  bool minorized = false;
  bool majorized = false;
  bool embedded = false;
  std::optional<std::size_t> minorized_witness;
  std::optional<std::size_t> majorized_witness;

  /// First failure, minorization checked before majorization.
  std::optional<std::size_t> witness_index() const noexcept {
    return minorized_witness ? minorized_witness : majorized_witness;
  }
};

RealVector sort_ascending(const RealVector& v);
RealVector sort_descending(const RealVector& v);

OrderingCheck is_ordered_minorized(const RealVector& v, const RealVector& w);
OrderingCheck is_ordered_majorized(const RealVector& v, const RealVector& w);
OrderingVerdict is_embedded(const RealVector& v, const RealVector& w);

OrderingCheck is_ordered_minorized_within(const RealVector& v, const RealVector& w, double eps);
OrderingCheck is_ordered_majorized_within(const RealVector& v, const RealVector& w, double eps);
OrderingVerdict is_embedded_within(const RealVector& v, const RealVector& w, double eps);

/// Entrywise image of v under f. Monotonicity of f is the caller's contract.
/// Throws Error(Domain) naming the entry if f throws or returns a non-finite value.
RealVector map_vector(const std::function<double(double)>& f, const RealVector& v);

} // namespace meanforge
