#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betashift/approximation.hpp"

#include <algorithm>
#include <cstddef>
#include <random>
#include <string_view>
#include <vector>

#include "betashift/admissibility.hpp"
#include "betashift/classify.hpp"
#include "betashift/dynamics.hpp"
#include "betashift/errors.hpp"
#include "betashift/real.hpp"
#include "betashift/subshift.hpp"
#include "betashift/words.hpp"

using namespace betashift;

namespace {

constexpr Bits kBits = 192;

FiniteWord F(std::string_view text) { return FiniteWord::parse(text); }

EventuallyPeriodicWord W(std::string_view text) {
  return EventuallyPeriodicWord::parse(text);
}

WordPair P(std::string_view lower, std::string_view upper) {
  return WordPair{W(lower), W(upper)};
}

Real golden_ratio(Bits bits) {
  return (Real::integer(1, bits) + Real::sqrt_integer(5, bits)) /
         Real::integer(2, bits);
}

// Re-derives every clause of the periodization from scratch on the raw
// prefix and checks the trace and the resulting word against them.
void verify_trace(const FiniteWord& p, std::size_t n, Bit close,
                  const PeriodizationTrace& t) {
  REQUIRE(t.n == n);
  REQUIRE(t.j >= 1);
  REQUIRE(t.j < n);
  for (std::size_t i = t.j + 1; i <= n; ++i)
    CHECK(p.at(i - 1) == p.at(i - t.j - 1));
  for (std::size_t cand = 1; cand < t.j; ++cand) {
    bool match = true;
    for (std::size_t i = cand + 1; i <= n && match; ++i)
      match = p.at(i - 1) == p.at(i - cand - 1);
    CHECK_FALSE(match);
  }
  REQUIRE(t.k >= n);
  REQUIRE(t.k + 1 <= p.size());
  CHECK(p.at(t.k) == close);
  CHECK(p.at(t.k - t.j) != close);
  for (std::size_t k = n; k < t.k; ++k) {
    const bool closes = p.at(k) == close && p.at(k - t.j) != close;
    CHECK_FALSE(closes);
  }
  CHECK(t.result.purely_periodic());
  CHECK(t.k % t.result.period_length() == 0);
  for (std::size_t i = 0; i < 3 * t.k; ++i)
    CHECK(t.result.at(i) == p.at(i % t.k));
}

}  // namespace

TEST_CASE("periodization reproduces the hand-worked trace") {
  const FiniteWord p = F("011011010");

  PeriodizationTrace t = periodize_lower(p, 7);
  CHECK(t.result == W("(01101101)"));
  CHECK(t.n == 7);
  CHECK(t.j == 3);
  CHECK(t.k == 8);

  // An earlier cut on the same prefix closes at the same position.
  t = periodize_lower(p, 4);
  CHECK(t.result == W("(01101101)"));
  CHECK(t.n == 4);
  CHECK(t.j == 3);
  CHECK(t.k == 8);

  // The mirror construction periodizes the complemented prefix.
  t = periodize_upper(complement(p), 7);
  CHECK(t.result == W("(10010010)"));
  CHECK(t.n == 7);
  CHECK(t.j == 3);
  CHECK(t.k == 8);

  CHECK_THROWS_AS(periodize_lower(p, 2), DomainError);
  CHECK_THROWS_AS(periodize_lower(p, 3), DomainError);  // letter is 1
  CHECK_THROWS_AS(periodize_upper(p, 4), DomainError);  // letter is 0
  CHECK_THROWS_AS(periodize_lower(p, 42), DomainError);
  CHECK_THROWS_AS(periodize_lower(F("1110"), 4), DomainError);
  // A prefix that never satisfies the closing condition runs out.
  CHECK_THROWS_AS(periodize_lower(F("000000"), 3), CallbackExhausted);
}

TEST_CASE("periodization pulls additional digits on demand") {
  const FiniteWord master = F("011011010");
  std::size_t calls = 0;
  const DigitSource extend =
      [&](std::size_t want) -> std::optional<FiniteWord> {
    ++calls;
    if (want <= master.size()) return master;
    return master;  // nothing longer exists; progress stops after this
  };

  // The closing position lies beyond the initial six letters.
  const PeriodizationTrace t = periodize_lower(F("011011"), 4, extend);
  CHECK(t.result == W("(01101101)"));
  CHECK(t.j == 3);
  CHECK(t.k == 8);
  CHECK(calls == 1);

  // Exhausted callbacks surface instead of looping.
  const DigitSource dead = [](std::size_t) -> std::optional<FiniteWord> {
    return std::nullopt;
  };
  CHECK_THROWS_AS(periodize_lower(F("011011"), 4, dead), CallbackExhausted);
  CHECK_THROWS_AS(periodize_lower(F("011011"), 4), CallbackExhausted);
}

TEST_CASE("periodization of infinite words closes or reports periodicity") {
  CHECK_THROWS_AS(periodize_lower(W("(011)"), 4), AlreadyPeriodic);
  CHECK_THROWS_AS(periodize_upper(W("(100)"), 4), AlreadyPeriodic);

  // Derived by hand: digits 01101010..., cut 8, overlap j = 7, closes at
  // k = 9 since letter 10 reads 0 and letter 3 reads 1.
  const PeriodizationTrace t = periodize_lower(W("01(10)"), 8);
  CHECK(t.j == 7);
  CHECK(t.k == 9);
  CHECK(t.result == W("(011010101)"));

  const PeriodizationTrace m = periodize_upper(W("10(01)"), 8);
  CHECK(m.j == 7);
  CHECK(m.k == 9);
  CHECK(m.result == W("(100101010)"));
}

TEST_CASE("periodization traces survive independent re-derivation") {
  std::mt19937 rng(461203u);
  int lower_done = 0;
  int upper_done = 0;
  for (int round = 0; round < 400; ++round) {
    const std::size_t len = 24 + rng() % 49;
    std::vector<Bit> bits(len);
    for (auto& b : bits) b = static_cast<Bit>(rng() & 1u);
    const FiniteWord p{bits};
    const Bit close = static_cast<Bit>(rng() & 1u);

    std::vector<std::size_t> cuts;
    for (std::size_t n = 3; n + 2 <= len; ++n)
      if (p.at(n - 1) == close) cuts.push_back(n);
    if (cuts.empty()) continue;
    const std::size_t n = cuts[rng() % cuts.size()];

    try {
      const PeriodizationTrace t =
          close == 0 ? periodize_lower(p, n) : periodize_upper(p, n);
      verify_trace(p, n, close, t);
      (close == 0 ? lower_done : upper_done) += 1;

      // Complementing the prefix swaps the two constructions exactly.
      const PeriodizationTrace m = close == 0
                                       ? periodize_upper(complement(p), n)
                                       : periodize_lower(complement(p), n);
      CHECK(m.result == complement(t.result));
      CHECK(m.j == t.j);
      CHECK(m.k == t.k);
    } catch (const DomainError&) {
      // no self-overlap at this cut; nothing to verify
    } catch (const CallbackExhausted&) {
      // the random prefix never closed; nothing to verify
    }
  }
  CHECK(lower_done > 60);
  CHECK(upper_done > 60);
}

TEST_CASE("periodized kneading words bracket their source") {
  // 1000 decided digits need the orbit precision to outlast the slope's
  // per-step enclosure growth.
  const Params params = make_params(Real::decimal("1.7234871", 1024),
                                    Real::decimal("0.2", 1024));
  const FiniteWord omega = kneading(params, Side::Minus, 1000);
  const FiniteWord nu = kneading(params, Side::Plus, 1000);

  for (const std::size_t start : {20u, 40u, 80u}) {
    std::size_t n = start;
    while (omega.at(n - 1) != 0) ++n;
    const PeriodizationTrace t = periodize_lower(omega, n);
    const EventuallyPeriodicWord& mu = t.result;

    // The words agree through letter k+1 and the first difference moves up.
    std::size_t d = 0;
    while (d < omega.size() && mu.at(d) == omega.at(d)) ++d;
    REQUIRE(d > t.k);
    REQUIRE(d < omega.size());
    CHECK(mu.at(d) == 1);

    // Shifts starting at a 0 letter never exceed the word itself.
    for (std::size_t m = 0; m < t.k; ++m)
      if (mu.at(m) == 0)
        CHECK(lex_compare(shift_word(mu, m), mu) !=
              std::strong_ordering::greater);
  }

  for (const std::size_t start : {20u, 40u, 80u}) {
    std::size_t n = start;
    while (nu.at(n - 1) != 1) ++n;
    const PeriodizationTrace t = periodize_upper(nu, n);
    const EventuallyPeriodicWord& eta = t.result;

    std::size_t d = 0;
    while (d < nu.size() && eta.at(d) == nu.at(d)) ++d;
    REQUIRE(d > t.k);
    REQUIRE(d < nu.size());
    CHECK(eta.at(d) == 0);

    for (std::size_t m = 0; m < t.k; ++m)
      if (eta.at(m) == 1)
        CHECK(lex_compare(shift_word(eta, m), eta) !=
              std::strong_ordering::less);
  }
}

TEST_CASE("slope and offset recovery at known pairs") {
  const Real phi = golden_ratio(kBits);
  const Real one = Real::integer(1, kBits);

  const Real b = recover_beta(P("(011)", "(100)"), kBits);
  CHECK(b.overlaps(phi));
  CHECK(b.width() <= 1e-30);

  // alpha = 1 - phi/2 at the golden pair.
  const Real a = recover_alpha(b, W("(011)"), kBits);
  const Real expected = one - phi / Real::integer(2, kBits);
  CHECK(a.overlaps(expected));
  CHECK(a.width() <= 1e-30);

  // The lower-edge pair recovers the golden slope with offset zero.
  const Real eb = recover_beta(P("(01)", "1(0)"), kBits);
  CHECK(eb.overlaps(phi));
  const Real ea = recover_alpha(eb, W("(01)"), kBits);
  CHECK(ea.contains_zero());
  CHECK(ea.width() <= 1e-30);

  // The full shift has slope two.
  const Real fb = recover_beta(P("0(1)", "1(0)"), kBits);
  CHECK(fb.overlaps(Real::integer(2, kBits)));

  // All-zero word: the sum vanishes and the offset is 1 - b, outside the
  // parameter triangle.
  const Real b32 = Real::fraction(3, 2, kBits);
  const Real az = recover_alpha(b32, W("(0)"), kBits);
  CHECK(compare_decide(az, Real::fraction(-1, 2, kBits)) == Decision::Equal);
}

TEST_CASE("recovered offsets project the word onto the critical point") {
  for (const auto& pair : {P("(011)", "(100)"), P("(0111)", "(1000)"),
                           P("01(10)", "100(01)"), P("(01)", "1(0)")}) {
    const Real b = recover_beta(pair, kBits);
    REQUIRE(b.certainly_greater(Real::integer(1, kBits)));
    const Real a = recover_alpha(b, pair.lower, kBits);
    // Bypass boundary detection: the identity is pure arithmetic.
    const Params params{b, a, BoundaryKind::Interior};
    const Real image = project(params, pair.lower, kBits);
    CHECK(image.overlaps(critical_point(params)));
    CHECK((image - critical_point(params)).width() <= 1e-25);
  }
}

TEST_CASE("validation confirms kneading pairs and recomputes impostors") {
  const Real phi = golden_ratio(256);
  const Real alpha = (Real::integer(3, 256) - Real::sqrt_integer(5, 256)) /
                     Real::integer(4, 256);
  const Params golden = make_params(phi, alpha);

  const ValidationResult ok = validate_pair(golden, P("(011)", "(100)"));
  CHECK(ok.confirmed);
  CHECK(ok.pair == P("(011)", "(100)"));

  // A pair that is not the kneading pair of these parameters is replaced by
  // the recomputed one, with its own recovered parameters.
  const ValidationResult swapped =
      validate_pair(golden, P("(0111)", "(1000)"));
  CHECK_FALSE(swapped.confirmed);
  CHECK(swapped.pair == P("(011)", "(100)"));
  CHECK(swapped.beta.overlaps(phi));
  CHECK(swapped.alpha.overlaps(alpha));

  // Aperiodic parameters admit no periodic recomputation.
  const Params aperiodic = make_params(Real::decimal("1.7234871", kBits),
                                       Real::decimal("0.2", kBits));
  CHECK_THROWS_AS(validate_pair(aperiodic, P("(011)", "(100)")),
                  ReductionFailed);
}

TEST_CASE("approximation returns a finite-type point unchanged") {
  const Real phi = golden_ratio(256);
  const Real alpha = (Real::integer(3, 256) - Real::sqrt_integer(5, 256)) /
                     Real::integer(4, 256);
  const Params params = make_params(phi, alpha);

  const SftApproximation approx = approximate_sft(params, 1e-6, 256);
  CHECK(approx.pair == P("(011)", "(100)"));
  CHECK_FALSE(approx.reduced);
  CHECK_FALSE(approx.lower_trace.has_value());
  CHECK_FALSE(approx.upper_trace.has_value());
  CHECK(approx.n_used == 0);

  // The point itself is the approximation: zero error, identical target.
  const Real zero(256);
  CHECK(compare_decide(approx.err_beta, zero) == Decision::Equal);
  CHECK(compare_decide(approx.err_alpha, zero) == Decision::Equal);
  CHECK(approx.target.beta.lo_str() == params.beta.lo_str());
  CHECK(approx.target.alpha.hi_str() == params.alpha.hi_str());
  CHECK(approx.certificate.forbidden ==
        std::vector<FiniteWord>{F("000"), F("111")});
  CHECK(approx.certificate.memory == 3);
}

TEST_CASE("approximation certifies an aperiodic interior point") {
  const Params params = make_params(Real::decimal("1.7234871", kBits),
                                    Real::decimal("0.2", kBits));

  const SftApproximation approx = approximate_sft(params, 1e-2, kBits);
  CHECK_FALSE(approx.err_beta.certainly_negative());
  CHECK(approx.err_beta.hi_double() < 1e-2);
  CHECK(approx.err_alpha.hi_double() < 1e-2);
  CHECK(approx.err_beta.width() < 1e-3);
  CHECK(approx.err_alpha.width() < 1e-3);
  CHECK(approx.n_used >= 3);
  CHECK(approx.target.boundary == BoundaryKind::Interior);
  CHECK(is_admissible(approx.pair, kBits).periodically_admissible);
  CHECK(approx.certificate.entropy.overlaps(log(approx.target.beta)));

  // The recovered parameters genuinely sit at a finite-type point whose
  // kneading pair is the approximating pair.
  const Classification cls = classify_shift(approx.target, 512, kBits);
  CHECK(cls.kind == ShiftClass::FiniteType);
  if (!approx.reduced) {
    REQUIRE(cls.pair.has_value());
    CHECK(*cls.pair == approx.pair);
  }

  // A tighter tolerance still certifies, with a deeper cut.
  const SftApproximation fine = approximate_sft(params, 1e-3, kBits);
  CHECK(fine.err_beta.hi_double() < 1e-3);
  CHECK(fine.err_alpha.hi_double() < 1e-3);
  CHECK(fine.n_used >= approx.n_used);
  CHECK(is_admissible(fine.pair, kBits).periodically_admissible);
}

TEST_CASE("approximation handles sofic sources and rejects boundary ones") {
  const Real phi = golden_ratio(kBits);
  const Real alpha = (Real::integer(7, kBits) -
                      Real::integer(3, kBits) * Real::sqrt_integer(5, kBits)) /
                     Real::integer(2, kBits);
  const Params params = make_params(phi, alpha);  // kneading pair is sofic
  const SftApproximation approx = approximate_sft(params, 1e-2, kBits);
  CHECK(approx.err_beta.hi_double() < 1e-2);
  CHECK(approx.err_alpha.hi_double() < 1e-2);
  CHECK(is_admissible(approx.pair, kBits).periodically_admissible);

  const Params edge = make_params(phi, Real::integer(0, kBits));
  CHECK_THROWS_AS(approximate_sft(edge, 1e-2, kBits), DomainError);
}
