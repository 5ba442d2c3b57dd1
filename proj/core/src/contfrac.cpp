#include "diophant/contfrac.hpp"

#include <algorithm>

#include "diophant/errors.hpp"

namespace diophant::cf {

namespace {

Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Integer& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

int sgn(const Integer& n) { return mpz_sgn(n.get_mpz_t()); }
int sgn(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

/// Reduces a surd with a square radicand to the rational it equals.
std::optional<Rational> as_rational(const QuadraticSurd& s) {
  if (!is_square(s.d)) return std::nullopt;
  return make_rational(s.p + isqrt(s.d), s.r);
}

void validate(const QuadraticSurd& s) {
  if (s.r == 0) throw InvalidArgument("surd with zero denominator");
  if (s.d < 0) throw InvalidArgument("surd with negative radicand");
}

/// sign((p + sqrt(d))/r - y), d not a perfect square.
int compare_surd(const QuadraticSurd& s, const Rational& y) {
  // sign(r) * sign(sqrt(d) - c) with c = y r - p.
  const Rational c = y * Rational(s.r) - Rational(s.p);
  int inner;
  if (sgn(c) < 0) {
    inner = 1;
  } else {
    inner = sgn(Rational(s.d) - c * c);
  }
  return sgn(s.r) * inner;
}

Enclosure abs(const Enclosure& e) {
  if (mpfr_sgn(e.lo().get()) >= 0) return e;
  if (mpfr_sgn(e.hi().get()) <= 0) return -e;
  return e;  // straddles zero; callers refine
}

Expansion expand_rational(Rational x, std::size_t max_terms) {
  Expansion out;
  Integer num = x.get_num(), den = x.get_den();
  while (out.quotients.size() < max_terms) {
    const Integer n = floor_div(num, den);
    out.quotients.push_back(n);
    const Integer rem = num - n * den;
    if (rem == 0) {
      out.terminated = true;
      break;
    }
    num = den;
    den = rem;
  }
  return out;
}

Expansion expand_surd(QuadraticSurd s, std::size_t max_terms) {
  // Keep r | (d - p^2) so that every complete quotient stays of this form.
  if (!divides(s.r, s.d - s.p * s.p)) {
    const Integer ar = s.r < 0 ? Integer(-s.r) : s.r;
    s.p *= ar;
    s.d *= s.r * s.r;
    s.r *= ar;
  }
  const Integer root = isqrt(s.d);
  Expansion out;
  while (out.quotients.size() < max_terms) {
    // floor((p + sqrt d)/r) from the integer square root.
    const Integer n = s.r > 0 ? floor_div(s.p + root, s.r) : floor_div(s.p + root + 1, s.r);
    out.quotients.push_back(n);
    const Integer p_next = n * s.r - s.p;
    const Integer r_next = (s.d - p_next * p_next) / s.r;
    s.p = p_next;
    s.r = r_next;
  }
  return out;
}

Expansion expand_enclosed(const Enclosure& e, std::size_t max_terms) {
  Rational lo = e.lower(), hi = e.upper();
  Expansion out;
  while (out.quotients.size() < max_terms) {
    const Integer n = floor(lo);
    if (floor(hi) != n) break;
    out.quotients.push_back(n);
    const Rational flo = lo - Rational(n), fhi = hi - Rational(n);
    if (flo == 0) break;
    lo = Rational(1) / fhi;
    hi = Rational(1) / flo;
  }
  return out;
}

}  // namespace

Value parse_value(std::string_view spec) {
  const std::string s(spec);
  if (s == "e") return NamedConstant::kE;
  if (s == "pi") return NamedConstant::kPi;
  if (s == "golden") return QuadraticSurd{1, 5, 2};
  if (s.rfind("sqrt:", 0) == 0) {
    const Integer d = parse_integer(s.substr(5));
    if (d < 0) throw InvalidArgument("sqrt of a negative number: " + s);
    return QuadraticSurd{0, d, 1};
  }
  if (s.rfind("surd:", 0) == 0) {
    const std::string body = s.substr(5);
    const auto c1 = body.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string::npos) throw InvalidArgument("expected surd:p,d,r in '" + s + "'");
    QuadraticSurd out{parse_integer(body.substr(0, c1)),
                      parse_integer(body.substr(c1 + 1, c2 - c1 - 1)),
                      parse_integer(body.substr(c2 + 1))};
    validate(out);
    return out;
  }
  try {
    return parse_rational(s);
  } catch (const InvalidArgument&) {
    throw InvalidArgument("unrecognized value spec '" + s +
                          "' (expected p/q, sqrt:d, surd:p,d,r, golden, e or pi)");
  }
}

std::string describe(const Value& x) {
  if (const auto* q = std::get_if<Rational>(&x)) return to_string(*q);
  if (const auto* s = std::get_if<QuadraticSurd>(&x)) {
    return "(" + to_string(s->p) + "+sqrt(" + to_string(s->d) + "))/" + to_string(s->r);
  }
  return std::get<NamedConstant>(x) == NamedConstant::kE ? "e" : "pi";
}

Enclosure enclose(const Value& x, unsigned prec) {
  if (const auto* q = std::get_if<Rational>(&x)) return Enclosure::point(*q, prec);
  if (const auto* s = std::get_if<QuadraticSurd>(&x)) {
    validate(*s);
    return (Enclosure::point(s->p, prec) + sqrt(Enclosure::point(s->d, prec))) /
           Enclosure::point(s->r, prec);
  }
  return std::get<NamedConstant>(x) == NamedConstant::kE ? Enclosure::euler(prec)
                                                         : Enclosure::pi(prec);
}

std::optional<int> exact_compare(const Value& x, const Rational& y) {
  if (const auto* q = std::get_if<Rational>(&x)) return cmp(*q, y) < 0 ? -1 : (*q == y ? 0 : 1);
  if (const auto* s = std::get_if<QuadraticSurd>(&x)) {
    validate(*s);
    if (auto r = as_rational(*s)) return cmp(*r, y) < 0 ? -1 : (*r == y ? 0 : 1);
    return compare_surd(*s, y);
  }
  return std::nullopt;
}

Expansion expand(const Value& x, std::size_t max_terms, unsigned prec) {
  if (const auto* q = std::get_if<Rational>(&x)) return expand_rational(*q, max_terms);
  if (const auto* s = std::get_if<QuadraticSurd>(&x)) {
    validate(*s);
    if (auto r = as_rational(*s)) return expand_rational(*r, max_terms);
    return expand_surd(*s, max_terms);
  }
  Expansion out = expand_enclosed(enclose(x, prec), max_terms);
  if (out.quotients.size() < max_terms) {
    throw PrecisionError(std::to_string(prec) + " bits certify only " +
                         std::to_string(out.quotients.size()) + " partial quotients of " +
                         describe(x) + "; raise --precision to get " +
                         std::to_string(max_terms));
  }
  return out;
}

std::vector<Convergent> convergents(std::span<const Integer> quotients) {
  std::vector<Convergent> out;
  out.reserve(quotients.size());
  for (std::size_t j = 0; j < quotients.size(); ++j) {
    const Integer& n = quotients[j];
    Convergent c{j, n, 0, 0};
    if (j == 0) {
      c.numerator = n;
      c.denominator = 1;
    } else if (j == 1) {
      c.numerator = quotients[0] * n + 1;
      c.denominator = n;
    } else {
      c.numerator = n * out[j - 1].numerator + out[j - 2].numerator;
      c.denominator = n * out[j - 1].denominator + out[j - 2].denominator;
    }
    out.push_back(std::move(c));
  }
  return out;
}

Enclosure approximation_error(const Value& x, const Rational& y, unsigned prec) {
  if (auto c = exact_compare(x, y); c && *c == 0) return Enclosure::point(0L, prec);
  for (unsigned pr = prec; pr <= kMaxPrecision; pr *= 2) {
    const Enclosure e = abs(enclose(x, pr) - Enclosure::point(y, pr));
    if (e.is_positive()) return e;
  }
  throw PrecisionError("approximation error of " + to_string(y) + " to " + describe(x) +
                       " not separated from 0");
}

BoundCheck check_convergent_bounds_enclosed(const Value& x, const Convergent& c,
                                            const Integer& next_denominator, unsigned prec) {
  const Rational lower = make_rational(Integer(1), 2 * c.denominator * next_denominator);
  const Rational upper = make_rational(Integer(1), c.denominator * next_denominator);
  const Rational approx = make_rational(c.numerator, c.denominator);
  for (unsigned pr = prec; pr <= kMaxPrecision; pr *= 2) {
    const Enclosure err = approximation_error(x, approx, pr);
    if (err.certainly_ge(lower) && err.certainly_le(upper)) return BoundCheck::kHolds;
    if (err.certainly_lt(lower) || err.certainly_gt(upper)) return BoundCheck::kFails;
  }
  throw PrecisionError("convergent bound check undecided for j = " + std::to_string(c.j));
}

BoundCheck check_convergent_bounds(const Value& x, const Convergent& c,
                                   const Integer& next_denominator, unsigned prec) {
  const Rational lower = make_rational(Integer(1), 2 * c.denominator * next_denominator);
  const Rational upper = make_rational(Integer(1), c.denominator * next_denominator);
  const Rational approx = make_rational(c.numerator, c.denominator);
  if (!exact_compare(x, approx)) {
    return check_convergent_bounds_enclosed(x, c, next_denominator, prec);
  }
  const bool within_upper =
      *exact_compare(x, approx - upper) >= 0 && *exact_compare(x, approx + upper) <= 0;
  const bool beyond_lower =
      *exact_compare(x, approx - lower) <= 0 || *exact_compare(x, approx + lower) >= 0;
  return within_upper && beyond_lower ? BoundCheck::kHolds : BoundCheck::kFails;
}

std::vector<ConvergentRow> convergent_table(const Value& x, std::size_t terms, unsigned prec) {
  if (terms == 0) return {};
  Expansion ex;
  try {
    ex = expand(x, terms + 1, prec);
  } catch (const PrecisionError&) {
    ex = expand(x, terms, prec);  // rethrows when even `terms` is out of reach
  }
  const auto convs = convergents(ex.quotients);
  std::vector<ConvergentRow> rows;
  const std::size_t shown = std::min(terms, convs.size());
  for (std::size_t j = 0; j < shown; ++j) {
    const Rational approx = make_rational(convs[j].numerator, convs[j].denominator);
    ConvergentRow row{convs[j], approximation_error(x, approx, prec), BoundCheck::kNotApplicable};
    if (j + 1 < convs.size()) {
      row.bounds = check_convergent_bounds(x, convs[j], convs[j + 1].denominator, prec);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

/// |x - a/q| < 1/(2q^2), decided exactly when possible.
bool within_legendre(const Value& x, const Integer& a, const Integer& q, unsigned prec) {
  const Rational c = make_rational(a, q);
  const Rational b = make_rational(Integer(1), 2 * q * q);
  if (auto lo = exact_compare(x, c - b)) {
    return *lo > 0 && *exact_compare(x, c + b) < 0;
  }
  for (unsigned pr = prec; pr <= kMaxPrecision; pr *= 2) {
    const Enclosure err = approximation_error(x, c, pr);
    if (err.certainly_lt(b)) return true;
    if (err.certainly_ge(b)) return false;
  }
  throw PrecisionError("Legendre test undecided");
}

}  // namespace

std::vector<Rational> legendre_fractions(const Value& x, std::uint64_t qmax, unsigned prec) {
  const Enclosure ex = enclose(x, prec);
  const Rational lo = ex.lower(), hi = ex.upper();
  std::vector<Rational> out;
  for (std::uint64_t qq = 1; qq <= qmax; ++qq) {
    const Integer q = from_u64(qq);
    const Integer a_lo = floor(lo * Rational(q)) - 1;
    const Integer a_hi = ceil(hi * Rational(q)) + 1;
    for (Integer a = a_lo; a <= a_hi; ++a) {
      if (gcd(a, q) != 1) continue;
      if (within_legendre(x, a, q, prec)) out.push_back(make_rational(a, q));
    }
  }
  return out;
}

BestApproximation best_approximation(const Value& x, std::uint64_t qmax, unsigned prec) {
  if (qmax == 0) throw InvalidArgument("best_approximation needs qmax >= 1");
  const Enclosure ex = enclose(x, prec);
  std::optional<BestApproximation> best;
  for (std::uint64_t qq = 1; qq <= qmax; ++qq) {
    const Integer q = from_u64(qq);
    const Integer a0 = floor(ex.lower() * Rational(q));
    const Integer a1 = ceil(ex.upper() * Rational(q));
    for (Integer a = a0; a <= a1; ++a) {
      const Rational c = make_rational(a, q);
      if (best && best->fraction == c) continue;
      Enclosure err = approximation_error(x, c, prec);
      if (!best) {
        best = BestApproximation{c, err};
        continue;
      }
      // Distinct fractions are at distinct distances from an irrational x.
      const int s = certified_sign(
          [&](unsigned pr) {
            return approximation_error(x, c, pr) - approximation_error(x, best->fraction, pr);
          },
          prec);
      if (s < 0) best = BestApproximation{c, std::move(err)};
    }
  }
  return *best;
}

std::vector<std::pair<std::size_t, Enclosure>> irrationality_exponents(const Value& x,
                                                                      std::size_t terms,
                                                                      unsigned prec) {
  const Expansion ex = expand(x, terms, prec);
  std::vector<std::pair<std::size_t, Enclosure>> out;
  for (const auto& c : convergents(ex.quotients)) {
    if (c.denominator < 2) continue;
    const Rational approx = make_rational(c.numerator, c.denominator);
    const Enclosure err = approximation_error(x, approx, prec);
    if (err.is_point()) continue;
    const unsigned pr = err.precision();
    out.emplace_back(c.j, -log(err) / log(Enclosure::point(c.denominator, pr)));
  }
  return out;
}

}  // namespace diophant::cf
