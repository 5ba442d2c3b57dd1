#pragma once

#include <span>
#include <vector>

#include "diophant/rational.hpp"

namespace diophant {

/// Closed interval [lo, hi] with exact rational endpoints.
struct RatInterval {
  Rational lo;
  Rational hi;

  friend bool operator==(const RatInterval&, const RatInterval&) = default;
};

/// Finite union of closed rational subintervals of [0, 1] in canonical
/// form: parts sorted by lo, pairwise separated by strict gaps, clipped to
/// [0, 1]. Touching intervals are merged, so structural equality is set
/// equality up to the measure-zero distinction between open and closed.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  /// Sorts, clips to [0,1] and merges overlapping or touching intervals.
  /// Throws InvalidArgument if some input has lo > hi.
  static IntervalUnion normalize(std::vector<RatInterval> raw);

  /// Wraps parts already in canonical form. Throws InvariantFailure if they
  /// are not.
  static IntervalUnion from_canonical(std::vector<RatInterval> parts);

  std::span<const RatInterval> parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }
  std::size_t size() const noexcept { return parts_.size(); }

  /// Closed membership, by binary search.
  bool contains(const Rational& x) const;
  /// Every point of `other` lies in *this.
  bool includes(const IntervalUnion& other) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  explicit IntervalUnion(std::vector<RatInterval> parts) : parts_(std::move(parts)) {}

  std::vector<RatInterval> parts_;
};

IntervalUnion normalize(std::vector<RatInterval> raw);
Rational measure(const IntervalUnion& u);
IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v);
IntervalUnion unite(const IntervalUnion& u, const IntervalUnion& v);
/// Union of many sets, merged in one pass.
IntervalUnion unite_all(std::span<const IntervalUnion> sets);

}  // namespace diophant
