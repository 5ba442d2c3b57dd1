#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "diophant/errors.hpp"
#include "diophant/rational.hpp"

namespace diophant {

inline constexpr unsigned kDefaultPrecision = 128;
inline constexpr unsigned kMaxPrecision = 1u << 14;

/// Owning handle for an mpfr_t of fixed precision.
class BigFloat {
 public:
  explicit BigFloat(unsigned prec = kDefaultPrecision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  unsigned precision() const noexcept {
    return static_cast<unsigned>(mpfr_get_prec(value_));
  }

  /// Exact dyadic value as a rational. Requires a finite value.
  Rational to_rational() const;
  std::string to_string(int digits, mpfr_rnd_t rnd) const;

 private:
  mpfr_t value_;
  bool owns_ = false;
};

/// A closed interval [lo, hi] of reals with MPFR endpoints, maintained with
/// outward rounding so that it always contains the true value it tracks.
class Enclosure {
 public:
  explicit Enclosure(unsigned prec = kDefaultPrecision);

  static Enclosure point(const Rational& x, unsigned prec = kDefaultPrecision);
  static Enclosure point(const Integer& x, unsigned prec = kDefaultPrecision);
  static Enclosure point(long x, unsigned prec = kDefaultPrecision);
  static Enclosure hull(const Rational& lo, const Rational& hi,
                        unsigned prec = kDefaultPrecision);
  static Enclosure pi(unsigned prec = kDefaultPrecision);
  static Enclosure euler(unsigned prec = kDefaultPrecision);

  unsigned precision() const noexcept { return prec_; }
  const BigFloat& lo() const noexcept { return lo_; }
  const BigFloat& hi() const noexcept { return hi_; }

  Rational lower() const { return lo_.to_rational(); }
  Rational upper() const { return hi_.to_rational(); }
  /// hi - lo, exactly.
  Rational width() const { return upper() - lower(); }
  double lower_double() const;
  double upper_double() const;
  double midpoint() const;

  bool is_point() const;
  bool contains(const Rational& x) const;
  bool contains_zero() const;
  bool overlaps(const Enclosure& other) const;
  bool is_positive() const;  // lo > 0
  bool is_negative() const;  // hi < 0

  // Certified orderings: true only when every point of *this relates to
  // every point of `other` as stated.
  bool certainly_lt(const Enclosure& other) const;
  bool certainly_le(const Enclosure& other) const;
  bool certainly_gt(const Enclosure& other) const { return other.certainly_lt(*this); }
  bool certainly_ge(const Enclosure& other) const { return other.certainly_le(*this); }
  bool certainly_le(const Rational& x) const;
  bool certainly_ge(const Rational& x) const;
  bool certainly_lt(const Rational& x) const;
  bool certainly_gt(const Rational& x) const;

  /// Smallest interval containing both.
  Enclosure join(const Enclosure& other) const;

  Enclosure operator-() const;
  Enclosure reciprocal() const;

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);

  Enclosure& operator+=(const Enclosure& b) { return *this = *this + b; }
  Enclosure& operator-=(const Enclosure& b) { return *this = *this - b; }
  Enclosure& operator*=(const Enclosure& b) { return *this = *this * b; }
  Enclosure& operator/=(const Enclosure& b) { return *this = *this / b; }

  friend Enclosure exp(const Enclosure& x);
  friend Enclosure log(const Enclosure& x);
  friend Enclosure sqrt(const Enclosure& x);
  friend Enclosure pow(const Enclosure& x, long n);
  /// x^e for x >= 0 (x > 0 when e < 0), with e = n/d evaluated as a d-th
  /// root of x^n so no irrational exponent is ever rounded.
  friend Enclosure pow(const Enclosure& x, const Rational& e);

  std::string to_string(int digits = 20) const;

 private:
  Enclosure(BigFloat lo, BigFloat hi);

  unsigned prec_;
  BigFloat lo_;
  BigFloat hi_;
};

/// Evaluates `eval(prec)` at doubling precision, starting at `start`, until
/// the returned enclosure excludes zero. Returns its sign, or 0 when the
/// enclosure collapses to the single point 0.
template <class Eval>
int certified_sign(Eval&& eval, unsigned start = kDefaultPrecision,
                   unsigned max_prec = kMaxPrecision) {
  for (unsigned prec = start; prec <= max_prec; prec *= 2) {
    const Enclosure e = eval(prec);
    if (e.is_positive()) return 1;
    if (e.is_negative()) return -1;
    if (e.is_point()) return 0;
  }
  throw PrecisionError("comparison undecided at " + std::to_string(max_prec) +
                       " bits");
}

}  // namespace diophant
