#include "diophant/enclosure.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <memory>

namespace diophant {

BigFloat::BigFloat(unsigned prec) {
  mpfr_init2(value_, static_cast<mpfr_prec_t>(prec));
  mpfr_set_zero(value_, 1);
  owns_ = true;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
  owns_ = true;
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // Steal the limbs; leave `other` with a fresh minimal value.
  *value_ = *other.value_;
  owns_ = other.owns_;
  other.owns_ = false;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    if (!owns_) {
      mpfr_init2(value_, mpfr_get_prec(other.value_));
      owns_ = true;
    } else {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) {
    if (owns_) mpfr_clear(value_);
    *value_ = *other.value_;
    owns_ = other.owns_;
    other.owns_ = false;
  }
  return *this;
}

BigFloat::~BigFloat() {
  if (owns_) mpfr_clear(value_);
}

Rational BigFloat::to_rational() const {
  if (!mpfr_number_p(value_)) throw PrecisionError("non-finite enclosure endpoint");
  Rational q;
  mpfr_get_q(q.get_mpq_t(), value_);
  return q;
}

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(digits) + "R*g";
  mpfr_asprintf(&buf, fmt.c_str(), rnd, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

namespace {

unsigned join_prec(const Enclosure& a, const Enclosure& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

Enclosure::Enclosure(unsigned prec) : prec_(prec), lo_(prec), hi_(prec) {}

Enclosure::Enclosure(BigFloat lo, BigFloat hi)
    : prec_(lo.precision()), lo_(std::move(lo)), hi_(std::move(hi)) {}

Enclosure Enclosure::point(const Rational& x, unsigned prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::point(const Integer& x, unsigned prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_z(lo.get(), x.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), x.get_mpz_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::point(long x, unsigned prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_si(lo.get(), x, MPFR_RNDD);
  mpfr_set_si(hi.get(), x, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::hull(const Rational& lo, const Rational& hi, unsigned prec) {
  if (lo > hi) throw InvalidArgument("enclosure hull with lo > hi");
  BigFloat l(prec), h(prec);
  mpfr_set_q(l.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(h.get(), hi.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(l), std::move(h));
}

Enclosure Enclosure::pi(unsigned prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::euler(unsigned prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_ui(lo.get(), 1, MPFR_RNDN);
  mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

double Enclosure::lower_double() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
double Enclosure::upper_double() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }

double Enclosure::midpoint() const {
  BigFloat m(prec_ + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return mpfr_get_d(m.get(), MPFR_RNDN);
}

bool Enclosure::is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }

bool Enclosure::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_.get(), x.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_.get(), x.get_mpq_t()) >= 0;
}

bool Enclosure::contains_zero() const {
  return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

bool Enclosure::overlaps(const Enclosure& other) const {
  return mpfr_lessequal_p(lo_.get(), other.hi_.get()) &&
         mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

bool Enclosure::is_positive() const { return mpfr_sgn(lo_.get()) > 0; }
bool Enclosure::is_negative() const { return mpfr_sgn(hi_.get()) < 0; }

bool Enclosure::certainly_lt(const Enclosure& other) const {
  return mpfr_less_p(hi_.get(), other.lo_.get()) != 0;
}

bool Enclosure::certainly_le(const Enclosure& other) const {
  return mpfr_lessequal_p(hi_.get(), other.lo_.get()) != 0;
}

bool Enclosure::certainly_le(const Rational& x) const {
  return mpfr_cmp_q(hi_.get(), x.get_mpq_t()) <= 0;
}
bool Enclosure::certainly_lt(const Rational& x) const {
  return mpfr_cmp_q(hi_.get(), x.get_mpq_t()) < 0;
}
bool Enclosure::certainly_ge(const Rational& x) const {
  return mpfr_cmp_q(lo_.get(), x.get_mpq_t()) >= 0;
}
bool Enclosure::certainly_gt(const Rational& x) const {
  return mpfr_cmp_q(lo_.get(), x.get_mpq_t()) > 0;
}

Enclosure Enclosure::join(const Enclosure& other) const {
  const unsigned prec = join_prec(*this, other);
  BigFloat lo(prec), hi(prec);
  mpfr_min(lo.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_max(hi.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::operator-() const {
  BigFloat lo(prec_), hi(prec_);
  mpfr_neg(lo.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(hi.get(), lo_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::reciprocal() const {
  if (contains_zero()) throw InvalidArgument("reciprocal of an enclosure containing 0");
  BigFloat lo(prec_), hi(prec_);
  mpfr_ui_div(lo.get(), 1, hi_.get(), MPFR_RNDD);
  mpfr_ui_div(hi.get(), 1, lo_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  const unsigned prec = join_prec(a, b);
  BigFloat lo(prec), hi(prec);
  mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  const unsigned prec = join_prec(a, b);
  BigFloat lo(prec), hi(prec);
  mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  const unsigned prec = join_prec(a, b);
  const std::array<mpfr_srcptr, 2> xs{a.lo_.get(), a.hi_.get()};
  const std::array<mpfr_srcptr, 2> ys{b.lo_.get(), b.hi_.get()};
  BigFloat lo(prec), hi(prec), t(prec);
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.contains_zero()) throw InvalidArgument("division by an enclosure containing 0");
  // Both signs of b are fixed; pick the endpoint pairing directly.
  const unsigned prec = join_prec(a, b);
  const std::array<mpfr_srcptr, 2> xs{a.lo_.get(), a.hi_.get()};
  const std::array<mpfr_srcptr, 2> ys{b.lo_.get(), b.hi_.get()};
  BigFloat lo(prec), hi(prec), t(prec);
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure exp(const Enclosure& x) {
  BigFloat lo(x.prec_), hi(x.prec_);
  mpfr_exp(lo.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), x.hi_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure log(const Enclosure& x) {
  if (!x.is_positive()) throw InvalidArgument("log of an enclosure not strictly positive");
  BigFloat lo(x.prec_), hi(x.prec_);
  mpfr_log(lo.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_log(hi.get(), x.hi_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure sqrt(const Enclosure& x) {
  if (x.is_negative()) throw InvalidArgument("sqrt of a negative enclosure");
  BigFloat lo(x.prec_), hi(x.prec_);
  if (mpfr_sgn(x.lo_.get()) < 0) {
    mpfr_set_zero(lo.get(), 1);
  } else {
    mpfr_sqrt(lo.get(), x.lo_.get(), MPFR_RNDD);
  }
  mpfr_sqrt(hi.get(), x.hi_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure pow(const Enclosure& x, long n) {
  if (n < 0) return pow(x, -n).reciprocal();
  const unsigned long un = static_cast<unsigned long>(n);
  BigFloat lo(x.prec_), hi(x.prec_);
  if (n == 0) {
    mpfr_set_ui(lo.get(), 1, MPFR_RNDN);
    mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
  } else if (mpfr_sgn(x.lo_.get()) >= 0) {
    mpfr_pow_ui(lo.get(), x.lo_.get(), un, MPFR_RNDD);
    mpfr_pow_ui(hi.get(), x.hi_.get(), un, MPFR_RNDU);
  } else if (mpfr_sgn(x.hi_.get()) <= 0) {
    if (un % 2 == 0) {
      mpfr_pow_ui(lo.get(), x.hi_.get(), un, MPFR_RNDD);
      mpfr_pow_ui(hi.get(), x.lo_.get(), un, MPFR_RNDU);
    } else {
      mpfr_pow_ui(lo.get(), x.lo_.get(), un, MPFR_RNDD);
      mpfr_pow_ui(hi.get(), x.hi_.get(), un, MPFR_RNDU);
    }
  } else if (un % 2 == 1) {
    mpfr_pow_ui(lo.get(), x.lo_.get(), un, MPFR_RNDD);
    mpfr_pow_ui(hi.get(), x.hi_.get(), un, MPFR_RNDU);
  } else {
    BigFloat a(x.prec_), b(x.prec_);
    mpfr_pow_ui(a.get(), x.lo_.get(), un, MPFR_RNDU);
    mpfr_pow_ui(b.get(), x.hi_.get(), un, MPFR_RNDU);
    mpfr_set_zero(lo.get(), 1);
    mpfr_max(hi.get(), a.get(), b.get(), MPFR_RNDU);
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure pow(const Enclosure& x, const Rational& e) {
  if (e.get_den() == 1) {
    if (!e.get_num().fits_slong_p()) throw InvalidArgument("exponent too large");
    return pow(x, e.get_num().get_si());
  }
  if (e < 0) return pow(x, Rational(-e)).reciprocal();
  if (x.is_negative()) throw InvalidArgument("fractional power of a negative enclosure");
  if (!e.get_num().fits_ulong_p() || !e.get_den().fits_ulong_p()) {
    throw InvalidArgument("exponent too large");
  }
  const unsigned long num = e.get_num().get_ui();
  const unsigned long den = e.get_den().get_ui();
  BigFloat lo(x.prec_), hi(x.prec_);
  if (mpfr_sgn(x.lo_.get()) <= 0) {
    mpfr_set_zero(lo.get(), 1);
  } else {
    mpfr_pow_ui(lo.get(), x.lo_.get(), num, MPFR_RNDD);
    mpfr_rootn_ui(lo.get(), lo.get(), den, MPFR_RNDD);
  }
  mpfr_pow_ui(hi.get(), x.hi_.get(), num, MPFR_RNDU);
  mpfr_rootn_ui(hi.get(), hi.get(), den, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

std::string Enclosure::to_string(int digits) const {
  return "[" + lo_.to_string(digits, MPFR_RNDD) + ", " + hi_.to_string(digits, MPFR_RNDU) + "]";
}

}  // namespace diophant
