#include "diophant/rational.hpp"

#include <limits>

#include "diophant/errors.hpp"

namespace diophant {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kResourceLimit: return "ResourceLimit";
    case ErrorKind::kSaturation: return "SaturationError";
    case ErrorKind::kPrecondition: return "PreconditionError";
    case ErrorKind::kPrecision: return "PrecisionError";
    case ErrorKind::kInvariant: return "InvariantFailure";
  }
  return "Error";
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long long num, long long den) {
  return make_rational(Integer(std::to_string(num)), Integer(std::to_string(den)));
}

Integer parse_integer(std::string_view text) {
  std::string s(text);
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (s.size() == start) throw InvalidArgument("empty integer literal");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw InvalidArgument("not an integer: '" + s + "'");
    }
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)),
                       parse_integer(text.substr(slash + 1)));
}

std::string to_string(const Integer& n) { return n.get_str(10); }

std::string to_string(const Rational& q) { return q.get_str(10); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

std::uint64_t to_u64(const Integer& n) {
  if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) {
    throw InvalidArgument("integer does not fit in 64 bits: " + to_string(n));
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

Integer from_u64(std::uint64_t n) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(n), 0, 0, &n);
  return out;
}

Integer pow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Rational pow(const Rational& base, long exp) {
  if (exp < 0) {
    if (base == 0) throw InvalidArgument("zero to a negative power");
    return pow(Rational(1) / base, -exp);
  }
  Rational r(pow(Integer(base.get_num()), static_cast<unsigned long>(exp)),
             pow(Integer(base.get_den()), static_cast<unsigned long>(exp)));
  r.canonicalize();
  return r;
}

}  // namespace diophant
