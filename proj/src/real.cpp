#include "betashift/real.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <memory>

namespace betashift {

namespace {

mpfr_prec_t as_prec(Bits b) {
  if (b < static_cast<Bits>(MPFR_PREC_MIN) || b > kMaxBits) {
    throw DomainError("precision out of range: " + std::to_string(b));
  }
  return static_cast<mpfr_prec_t>(b);
}

std::string format(mpfr_srcptr v, int digits, mpfr_rnd_t rnd) {
  if (digits < 1) throw DomainError("digit count must be positive");
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, "%.*R*g", digits, rnd, v) < 0) {
    throw InternalError("mpfr_asprintf failed");
  }
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

Real::Real(Raw lo, Raw hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  check_invariant();
}

void Real::check_invariant() const {
  if (mpfr_nan_p(lo_.v) || mpfr_nan_p(hi_.v) || mpfr_greater_p(lo_.v, hi_.v)) {
    throw InternalError("Real: invalid enclosure");
  }
}

Real::Real(Bits prec) : lo_(as_prec(prec)), hi_(as_prec(prec)) {
  mpfr_set_zero(lo_.v, 0);
  mpfr_set_zero(hi_.v, 0);
}

Real Real::integer(long v, Bits prec) {
  Real r(prec);
  mpfr_set_si(r.lo_.v, v, MPFR_RNDD);
  mpfr_set_si(r.hi_.v, v, MPFR_RNDU);
  return r;
}

Real Real::decimal(std::string_view text, Bits prec) {
  Real r(prec);
  const std::string s(text);
  char* end_lo = nullptr;
  char* end_hi = nullptr;
  mpfr_strtofr(r.lo_.v, s.c_str(), &end_lo, 10, MPFR_RNDD);
  mpfr_strtofr(r.hi_.v, s.c_str(), &end_hi, 10, MPFR_RNDU);
  if (s.empty() || end_lo != s.c_str() + s.size() ||
      end_hi != s.c_str() + s.size()) {
    throw DomainError("not a decimal number: \"" + s + "\"");
  }
  r.check_invariant();
  return r;
}

Real Real::fraction(long num, long den, Bits prec) {
  if (den == 0) throw DomainError("fraction with zero denominator");
  return from_mpq(mpq_class(num, den), prec);
}

Real Real::from_mpz(const mpz_class& v, Bits prec) {
  Real r(prec);
  mpfr_set_z(r.lo_.v, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_.v, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Real Real::from_mpq(const mpq_class& v, Bits prec) {
  mpq_class c(v);
  c.canonicalize();
  Real r(prec);
  mpfr_set_q(r.lo_.v, c.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_.v, c.get_mpq_t(), MPFR_RNDU);
  return r;
}

Real Real::sqrt_integer(unsigned long v, Bits prec) {
  Real r(prec);
  mpfr_sqrt_ui(r.lo_.v, v, MPFR_RNDD);
  mpfr_sqrt_ui(r.hi_.v, v, MPFR_RNDU);
  return r;
}

Bits Real::precision() const {
  return static_cast<Bits>(mpfr_get_prec(lo_.v));
}

bool Real::is_exact() const { return mpfr_equal_p(lo_.v, hi_.v) != 0; }

bool Real::contains_zero() const {
  return mpfr_sgn(lo_.v) <= 0 && mpfr_sgn(hi_.v) >= 0;
}

bool Real::certainly_positive() const { return mpfr_sgn(lo_.v) > 0; }

bool Real::certainly_negative() const { return mpfr_sgn(hi_.v) < 0; }

bool Real::certainly_less(const Real& o) const {
  return mpfr_less_p(hi_.v, o.lo_.v) != 0;
}

bool Real::certainly_greater(const Real& o) const {
  return mpfr_greater_p(lo_.v, o.hi_.v) != 0;
}

bool Real::overlaps(const Real& o) const {
  return !certainly_less(o) && !certainly_greater(o);
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.lo_.v, hi_.v, MPFR_RNDD);
  mpfr_neg(r.hi_.v, lo_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(std::max(a.precision(), b.precision()));
  mpfr_add(r.lo_.v, a.lo_.v, b.lo_.v, MPFR_RNDD);
  mpfr_add(r.hi_.v, a.hi_.v, b.hi_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(std::max(a.precision(), b.precision()));
  mpfr_sub(r.lo_.v, a.lo_.v, b.hi_.v, MPFR_RNDD);
  mpfr_sub(r.hi_.v, a.hi_.v, b.lo_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real operator*(const Real& a, const Real& b) {
  const Bits prec = std::max(a.precision(), b.precision());
  Real r(prec);
  Real::Raw t(as_prec(prec));
  const std::array<std::pair<mpfr_srcptr, mpfr_srcptr>, 4> prods = {{
      {a.lo_.v, b.lo_.v},
      {a.lo_.v, b.hi_.v},
      {a.hi_.v, b.lo_.v},
      {a.hi_.v, b.hi_.v},
  }};
  bool first = true;
  for (const auto& [x, y] : prods) {
    mpfr_mul(t.v, x, y, MPFR_RNDD);
    if (first || mpfr_less_p(t.v, r.lo_.v)) mpfr_set(r.lo_.v, t.v, MPFR_RNDD);
    mpfr_mul(t.v, x, y, MPFR_RNDU);
    if (first || mpfr_greater_p(t.v, r.hi_.v)) {
      mpfr_set(r.hi_.v, t.v, MPFR_RNDU);
    }
    first = false;
  }
  r.check_invariant();
  return r;
}

Real operator/(const Real& a, const Real& b) {
  if (b.contains_zero()) {
    throw PrecisionExhausted("division by an enclosure containing zero");
  }
  const Bits prec = std::max(a.precision(), b.precision());
  Real r(prec);
  Real::Raw t(as_prec(prec));
  const std::array<std::pair<mpfr_srcptr, mpfr_srcptr>, 4> quots = {{
      {a.lo_.v, b.lo_.v},
      {a.lo_.v, b.hi_.v},
      {a.hi_.v, b.lo_.v},
      {a.hi_.v, b.hi_.v},
  }};
  bool first = true;
  for (const auto& [x, y] : quots) {
    mpfr_div(t.v, x, y, MPFR_RNDD);
    if (first || mpfr_less_p(t.v, r.lo_.v)) mpfr_set(r.lo_.v, t.v, MPFR_RNDD);
    mpfr_div(t.v, x, y, MPFR_RNDU);
    if (first || mpfr_greater_p(t.v, r.hi_.v)) {
      mpfr_set(r.hi_.v, t.v, MPFR_RNDU);
    }
    first = false;
  }
  r.check_invariant();
  return r;
}

Real sqrt(const Real& x) {
  if (x.certainly_negative()) throw DomainError("sqrt of a negative number");
  if (mpfr_sgn(x.lo_.v) < 0) {
    throw PrecisionExhausted("sqrt of an enclosure straddling zero");
  }
  Real r(x.precision());
  mpfr_sqrt(r.lo_.v, x.lo_.v, MPFR_RNDD);
  mpfr_sqrt(r.hi_.v, x.hi_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real log(const Real& x) {
  if (x.certainly_negative() || (x.is_exact() && mpfr_zero_p(x.lo_.v))) {
    throw DomainError("log of a non-positive number");
  }
  if (!x.certainly_positive()) {
    throw PrecisionExhausted("log of an enclosure touching zero");
  }
  Real r(x.precision());
  mpfr_log(r.lo_.v, x.lo_.v, MPFR_RNDD);
  mpfr_log(r.hi_.v, x.hi_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real abs(const Real& x) {
  if (mpfr_sgn(x.lo_.v) >= 0) return x;
  if (mpfr_sgn(x.hi_.v) <= 0) return -x;
  Real r(x.precision());
  mpfr_set_zero(r.lo_.v, 0);
  mpfr_neg(r.hi_.v, x.lo_.v, MPFR_RNDU);
  if (mpfr_less_p(r.hi_.v, x.hi_.v)) mpfr_set(r.hi_.v, x.hi_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real Real::pow_integer(long k) const {
  if (k < 0) {
    return Real::integer(1, precision()) / pow_integer(-k);
  }
  if (k == 0) return Real::integer(1, precision());
  if (mpfr_sgn(lo_.v) >= 0) {
    // Monotone on non-negative enclosures: endpoint powers suffice.
    Real r(precision());
    mpfr_pow_si(r.lo_.v, lo_.v, k, MPFR_RNDD);
    mpfr_pow_si(r.hi_.v, hi_.v, k, MPFR_RNDU);
    r.check_invariant();
    return r;
  }
  // General case by binary exponentiation over interval products.
  Real base = *this;
  Real acc = Real::integer(1, precision());
  unsigned long e = static_cast<unsigned long>(k);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

Real Real::mul_2exp(long e) const {
  Real r(precision());
  mpfr_mul_2si(r.lo_.v, lo_.v, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_.v, hi_.v, e, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real Real::span(const Real& a, const Real& b) {
  Real r(std::max(a.precision(), b.precision()));
  mpfr_set(r.lo_.v, a.lo_.v, MPFR_RNDD);
  mpfr_set(r.hi_.v, b.hi_.v, MPFR_RNDU);
  r.check_invariant();
  return r;
}

Real intersect(const Real& a, const Real& b) {
  Real r(std::max(a.precision(), b.precision()));
  mpfr_set(r.lo_.v, mpfr_greater_p(a.lo_.v, b.lo_.v) ? a.lo_.v : b.lo_.v,
           MPFR_RNDD);
  mpfr_set(r.hi_.v, mpfr_less_p(a.hi_.v, b.hi_.v) ? a.hi_.v : b.hi_.v,
           MPFR_RNDU);
  if (mpfr_greater_p(r.lo_.v, r.hi_.v)) {
    throw InternalError("intersect: disjoint enclosures");
  }
  return r;
}

Real Real::lower() const {
  Real r(precision());
  mpfr_set(r.lo_.v, lo_.v, MPFR_RNDD);
  mpfr_set(r.hi_.v, lo_.v, MPFR_RNDU);
  return r;
}

Real Real::upper() const {
  Real r(precision());
  mpfr_set(r.lo_.v, hi_.v, MPFR_RNDD);
  mpfr_set(r.hi_.v, hi_.v, MPFR_RNDU);
  return r;
}

namespace {

// Midpoint at the enclosure's own precision, rounded to nearest.
struct Mid {
  mpfr_t v;
  Mid(mpfr_srcptr lo, mpfr_srcptr hi) {
    mpfr_init2(v, mpfr_get_prec(lo));
    mpfr_add(v, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(v, v, 1, MPFR_RNDN);
  }
  ~Mid() { mpfr_clear(v); }
};

}  // namespace

double Real::to_double() const {
  const Mid m(lo_.v, hi_.v);
  return mpfr_get_d(m.v, MPFR_RNDN);
}

double Real::lo_double() const { return mpfr_get_d(lo_.v, MPFR_RNDD); }

double Real::hi_double() const { return mpfr_get_d(hi_.v, MPFR_RNDU); }

double Real::width() const {
  Raw w(as_prec(precision()));
  mpfr_sub(w.v, hi_.v, lo_.v, MPFR_RNDU);
  return mpfr_get_d(w.v, MPFR_RNDU);
}

double Real::radius() const {
  const Mid m(lo_.v, hi_.v);
  Raw a(as_prec(precision()));
  Raw b(as_prec(precision()));
  mpfr_sub(a.v, hi_.v, m.v, MPFR_RNDU);
  mpfr_sub(b.v, m.v, lo_.v, MPFR_RNDU);
  if (mpfr_less_p(a.v, b.v)) mpfr_swap(a.v, b.v);
  return mpfr_get_d(a.v, MPFR_RNDU);
}

std::string Real::str(int digits) const {
  const Mid m(lo_.v, hi_.v);
  return format(m.v, digits, MPFR_RNDN);
}

std::string Real::lo_str(int digits) const {
  return format(lo_.v, digits, MPFR_RNDD);
}

std::string Real::hi_str(int digits) const {
  return format(hi_.v, digits, MPFR_RNDU);
}

Decision compare_decide(const Real& a, const Real& b) {
  if (a.certainly_less(b)) return Decision::Less;
  if (a.certainly_greater(b)) return Decision::Greater;
  if (a.is_exact() && b.is_exact() && !a.certainly_less(b) &&
      !a.certainly_greater(b)) {
    return Decision::Equal;
  }
  return Decision::Undecided;
}

}  // namespace betashift
