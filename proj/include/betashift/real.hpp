#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <string_view>
#include <utility>

#include "betashift/errors.hpp"

namespace betashift {

// Working precision in bits.
using Bits = unsigned;

inline constexpr Bits kDefaultBits = 128;
inline constexpr Bits kMaxBits = 4096;

// A real number represented by a closed enclosure [lo, hi] whose endpoints
// are MPFR floats at a fixed precision.  Every operation rounds lo down and
// hi up, so the true value of any expression is always inside the enclosure.
//
// Operations that need a sign or separation the enclosure cannot certify
// (division through zero, log at zero, ...) throw PrecisionExhausted so the
// caller can retry at higher precision; see with_precision().
class Real {
 public:
  // Exact zero at the given precision.
  explicit Real(Bits prec);

  static Real integer(long v, Bits prec);
  // Parses decimal/scientific notation ("0.25", "1e-3") with directed
  // rounding; exact whenever the value is representable at `prec`.
  static Real decimal(std::string_view text, Bits prec);
  static Real fraction(long num, long den, Bits prec);
  static Real from_mpz(const mpz_class& v, Bits prec);
  static Real from_mpq(const mpq_class& v, Bits prec);
  static Real sqrt_integer(unsigned long v, Bits prec);

  Bits precision() const;

  bool is_exact() const;        // lo == hi
  bool contains_zero() const;   // lo <= 0 <= hi
  bool certainly_positive() const;
  bool certainly_negative() const;
  bool certainly_less(const Real& o) const;     // hi < o.lo
  bool certainly_greater(const Real& o) const;  // lo > o.hi
  bool overlaps(const Real& o) const;

  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  // Throws PrecisionExhausted if b's enclosure contains zero.
  friend Real operator/(const Real& a, const Real& b);

  // Throws PrecisionExhausted when the enclosure straddles the domain
  // boundary and DomainError when it is certainly outside.
  friend Real sqrt(const Real& x);
  friend Real log(const Real& x);
  friend Real abs(const Real& x);

  // x^k for any integer k; k < 0 requires the enclosure to exclude zero.
  Real pow_integer(long k) const;
  // Exact scaling by 2^e.
  Real mul_2exp(long e) const;

  // Exact singleton enclosures for the endpoints.
  Real lower() const;
  Real upper() const;

  // Enclosure spanning [a.lo, b.hi]; a.lo must not exceed b.hi.
  static Real span(const Real& a, const Real& b);
  // [max(a.lo, b.lo), min(a.hi, b.hi)]; throws InternalError when the
  // enclosures are disjoint.
  friend Real intersect(const Real& a, const Real& b);

  double to_double() const;  // midpoint, rounded to nearest
  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up
  // Upper bound on hi - lo.
  double width() const;
  // Upper bound on the distance from midpoint to either endpoint.
  double radius() const;

  // Midpoint / endpoints with the given number of significant digits.
  std::string str(int digits = 20) const;
  std::string lo_str(int digits = 20) const;
  std::string hi_str(int digits = 20) const;

 private:
  struct Raw {
    mpfr_t v;
    explicit Raw(mpfr_prec_t p) { mpfr_init2(v, p); }
    Raw(const Raw& o) {
      mpfr_init2(v, mpfr_get_prec(o.v));
      mpfr_set(v, o.v, MPFR_RNDN);
    }
    Raw(Raw&& o) noexcept {
      mpfr_init2(v, mpfr_get_prec(o.v));
      mpfr_swap(v, o.v);
    }
    Raw& operator=(Raw o) noexcept {
      mpfr_swap(v, o.v);
      return *this;
    }
    ~Raw() { mpfr_clear(v); }
  };

  Real(Raw lo, Raw hi);
  void check_invariant() const;

  Raw lo_, hi_;
};

enum class Decision { Less, Equal, Greater, Undecided };

// Three-way comparison that only answers when the enclosures prove it:
// Equal requires both sides exact.  Undecided means the working precision
// cannot separate the values.
Decision compare_decide(const Real& a, const Real& b);

// Runs fn(prec) with prec doubling from `start` whenever it throws
// PrecisionExhausted, up to `cap` (inclusive); the last failure propagates.
template <typename F>
auto with_precision(Bits start, Bits cap, F&& fn) {
  for (Bits p = start;; p *= 2) {
    try {
      return fn(p);
    } catch (const PrecisionExhausted&) {
      if (p * 2 > cap) throw;
    }
  }
}

template <typename F>
auto with_precision(F&& fn) {
  return with_precision(kDefaultBits, kMaxBits, std::forward<F>(fn));
}

}  // namespace betashift
