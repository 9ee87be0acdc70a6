#include "betashift/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "betashift/errors.hpp"

namespace betashift {

namespace {

constexpr std::size_t kDetectHorizon = 256;
constexpr std::size_t kPrefixCap = std::size_t{1} << 20;

// Lower-side periodization body; the upper side runs this on the
// complemented word.  Letters are 1-based in the trace.
PeriodizationTrace periodize_core(FiniteWord prefix, std::size_t n,
                                  const DigitSource& extend) {
  if (n < 3 || n > prefix.size())
    throw DomainError(
        "periodization cut must land on a letter at position 3 or later");
  if (prefix.at(n - 1) != 0)
    throw DomainError("periodization cut must land on the closing letter");

  // Minimal j >= 1 with letters j+1..n repeating letters 1..n-j.  Words
  // starting with the closing letter always admit j = n-1; others may admit
  // no overlap at all.
  std::size_t j = 0;
  for (std::size_t cand = 1; cand < n && j == 0; ++cand) {
    bool match = true;
    for (std::size_t i = cand + 1; i <= n && match; ++i)
      match = prefix.at(i - 1) == prefix.at(i - cand - 1);
    if (match) j = cand;
  }
  if (j == 0) throw DomainError("periodization cut admits no self-overlap");

  for (std::size_t k = n;; ++k) {
    while (k + 1 > prefix.size()) {
      if (!extend || prefix.size() >= kPrefixCap)
        throw CallbackExhausted(
            "digits ran out before the periodization closed");
      auto more =
          extend(std::min(kPrefixCap, 2 * prefix.size() + 64));
      if (!more || more->size() <= prefix.size())
        throw CallbackExhausted(
            "digits ran out before the periodization closed");
      prefix = std::move(*more);
    }
    if (prefix.at(k) == 0 && prefix.at(k - j) != 0) {
      std::vector<Bit> period(prefix.bits.begin(),
                              prefix.bits.begin() + static_cast<long>(k));
      return PeriodizationTrace{n, j, k,
                                EventuallyPeriodicWord({}, std::move(period))};
    }
  }
}

// sum_{k>=1} w_k * beta^(-k), closed form over the periodic tail.
Real inverse_power_sum(const EventuallyPeriodicWord& w, const Real& beta,
                       Bits bits) {
  const Real one = Real::integer(1, bits);
  const Real inv = one / beta;

  Real head = Real::integer(0, bits);
  Real power = one;
  for (Bit b : w.preperiod()) {
    power = power * inv;
    if (b) head = head + power;
  }

  Real cycle = Real::integer(0, bits);
  Real cpow = one;
  for (Bit b : w.period()) {
    cpow = cpow * inv;
    if (b) cycle = cycle + cpow;
  }

  // power is beta^(-pre) and cpow is beta^(-per) after the loops.
  return head + power * cycle / (one - cpow);
}

}  // namespace

PeriodizationTrace periodize_lower(const FiniteWord& prefix, std::size_t n,
                                   const DigitSource& extend) {
  return periodize_core(prefix, n, extend);
}

PeriodizationTrace periodize_upper(const FiniteWord& prefix, std::size_t n,
                                   const DigitSource& extend) {
  DigitSource wrapped;
  if (extend)
    wrapped = [&extend](std::size_t want) -> std::optional<FiniteWord> {
      auto got = extend(want);
      if (!got) return std::nullopt;
      return complement(*got);
    };
  PeriodizationTrace t = periodize_core(complement(prefix), n, wrapped);
  return PeriodizationTrace{t.n, t.j, t.k, complement(t.result)};
}

PeriodizationTrace periodize_lower(const EventuallyPeriodicWord& word,
                                   std::size_t n) {
  if (word.purely_periodic())
    throw AlreadyPeriodic("the word is its own periodization");
  const auto source = [&word](std::size_t want) -> std::optional<FiniteWord> {
    if (want > kPrefixCap) return std::nullopt;
    return prefix(word, want);
  };
  const std::size_t initial = std::max(
      n + 1, word.preperiod_length() + 2 * word.period_length() + 2);
  return periodize_lower(prefix(word, initial), n, source);
}

PeriodizationTrace periodize_upper(const EventuallyPeriodicWord& word,
                                   std::size_t n) {
  if (word.purely_periodic())
    throw AlreadyPeriodic("the word is its own periodization");
  PeriodizationTrace t = periodize_lower(complement(word), n);
  return PeriodizationTrace{t.n, t.j, t.k, complement(t.result)};
}

Real recover_beta(const WordPair& pair, Bits bits) {
  const ConstraintMachine machine(pair);
  return spectral_radius(follower_automaton(machine), bits);
}

Real recover_alpha(const Real& beta, const EventuallyPeriodicWord& lower,
                   Bits bits) {
  const Real one = Real::integer(1, bits);
  const Real sum = inverse_power_sum(lower, beta, bits);
  return one - beta + beta * (beta - one) * sum;
}

ValidationResult validate_pair(const Params& params, const WordPair& pair,
                               std::size_t max_len, Bits bits) {
  const auto lower = detect_kneading_period(params, Side::Minus, max_len, bits);
  const auto upper = detect_kneading_period(params, Side::Plus, max_len, bits);
  if (!lower || !upper)
    throw ReductionFailed(
        "kneading invariants at the recovered parameters were not detected "
        "periodic");
  if (*lower == pair.lower && *upper == pair.upper)
    return ValidationResult{true, pair, params.beta, params.alpha};
  if (!lower->purely_periodic() || !upper->purely_periodic())
    throw ReductionFailed(
        "recomputed kneading invariants are not purely periodic");

  const WordPair reduced{*lower, *upper};
  const Real beta = recover_beta(reduced, bits);
  const Real alpha = recover_alpha(beta, reduced.lower, bits);
  return ValidationResult{false, reduced, beta, alpha};
}

SftApproximation approximate_sft(const Params& params, double eps, Bits bits,
                                 std::size_t cut_cap) {
  if (params.boundary != BoundaryKind::Interior)
    throw DomainError("approximation requires interior parameters");
  if (!(eps > 0)) throw DomainError("tolerance must be positive");

  // Enclosure widths must undercut eps/10 before a success is accepted.
  Bits wbits = bits;
  const double needed = 2.0 * std::log2(10.0 / eps) + 32.0;
  if (needed > static_cast<double>(wbits)) wbits = static_cast<Bits>(needed);

  const auto detected_lower =
      detect_kneading_period(params, Side::Minus, kDetectHorizon, bits);
  const auto detected_upper =
      detect_kneading_period(params, Side::Plus, kDetectHorizon, bits);
  const bool lower_fixed = detected_lower && detected_lower->purely_periodic();
  const bool upper_fixed = detected_upper && detected_upper->purely_periodic();

  // A point whose kneading pair is already purely periodic needs no move:
  // the approximation is the identity with exactly zero error.
  if (lower_fixed && upper_fixed) {
    const WordPair pair{*detected_lower, *detected_upper};
    const std::size_t span =
        pair.lower.period_length() + pair.upper.period_length();
    const ValidationResult validated = validate_pair(
        params, pair, std::max<std::size_t>(512, 10 * span), wbits);
    SftCertificate certificate = forbidden_words(
        follower_automaton(ConstraintMachine(validated.pair)), validated.pair,
        wbits);
    const Real zero(wbits);
    return SftApproximation{params,
                            params,
                            validated.pair,
                            !validated.confirmed,
                            std::move(certificate),
                            zero,
                            zero,
                            0,
                            std::nullopt,
                            std::nullopt};
  }

  // Orbit enclosures widen by a factor of the slope per digit, so the
  // parameter precision bounds how many digits the expansion can decide.
  // Detected words carry exact digits and bypass the budget.
  const double per_digit = std::log2(params.beta.hi_double());
  const auto orbit_budget = static_cast<std::size_t>(
      std::max(16.0, (static_cast<double>(bits) - 32.0) / per_digit));

  FiniteWord lower_buf{std::vector<Bit>{}};
  FiniteWord upper_buf{std::vector<Bit>{}};
  const auto side_cap = [&](const std::optional<EventuallyPeriodicWord>& det) {
    return det ? kPrefixCap : orbit_budget;
  };
  const auto grow = [&](Side side, FiniteWord& buf,
                        const std::optional<EventuallyPeriodicWord>& det,
                        std::size_t want) {
    want = std::min(std::max<std::size_t>(want, 64), side_cap(det));
    if (buf.size() >= want) return;
    buf = det ? prefix(*det, want) : kneading(params, side, want);
  };
  const auto next_cut = [&](Side side, FiniteWord& buf,
                            const std::optional<EventuallyPeriodicWord>& det,
                            std::size_t from,
                            Bit close) -> std::optional<std::size_t> {
    for (std::size_t n = std::max<std::size_t>(from, 3); n <= side_cap(det);
         ++n) {
      if (n > buf.size()) grow(side, buf, det, std::max(n, 2 * buf.size()));
      if (n > buf.size()) return std::nullopt;
      if (buf.at(n - 1) == close) return n;
    }
    return std::nullopt;
  };
  const auto lower_extend = [&](std::size_t want) -> std::optional<FiniteWord> {
    if (want > side_cap(detected_lower)) return std::nullopt;
    grow(Side::Minus, lower_buf, detected_lower, want);
    return lower_buf;
  };
  const auto upper_extend = [&](std::size_t want) -> std::optional<FiniteWord> {
    if (want > side_cap(detected_upper)) return std::nullopt;
    grow(Side::Plus, upper_buf, detected_upper, want);
    return upper_buf;
  };

  std::optional<std::pair<std::size_t, std::size_t>> last_cuts;
  for (std::size_t t = 3; t <= cut_cap; ++t) {
    std::optional<std::size_t> cut_lo, cut_up;
    if (!lower_fixed) {
      cut_lo = next_cut(Side::Minus, lower_buf, detected_lower, t, 0);
      if (!cut_lo)
        throw PrecisionExhausted(
            "kneading digits ran out before certification");
    }
    if (!upper_fixed) {
      cut_up = next_cut(Side::Plus, upper_buf, detected_upper, t, 1);
      if (!cut_up)
        throw PrecisionExhausted(
            "kneading digits ran out before certification");
    }
    const auto cuts =
        std::make_pair(cut_lo.value_or(0), cut_up.value_or(0));
    if (last_cuts && *last_cuts == cuts) continue;
    last_cuts = cuts;

    std::optional<PeriodizationTrace> lower_trace, upper_trace;
    try {
      if (!lower_fixed)
        lower_trace = periodize_lower(lower_buf, *cut_lo, lower_extend);
      if (!upper_fixed)
        upper_trace = periodize_upper(upper_buf, *cut_up, upper_extend);
    } catch (const CallbackExhausted&) {
      throw PrecisionExhausted(
          "the digit budget ended before the periodization closed");
    }
    const WordPair candidate{
        lower_fixed ? *detected_lower : lower_trace->result,
        upper_fixed ? *detected_upper : upper_trace->result};

    // Recover (b, a) at a precision whose enclosure widths pass the gate.
    Bits wb = wbits;
    std::optional<Real> b, a;
    for (;;) {
      Real rb = recover_beta(candidate, wb);
      if (!rb.certainly_greater(Real::integer(1, wb))) break;
      Real ra = recover_alpha(rb, candidate.lower, wb);
      if (rb.width() < eps / 10 && ra.width() < eps / 10) {
        b = rb;
        a = ra;
        break;
      }
      if (wb >= kMaxBits)
        throw PrecisionExhausted(
            "recovered enclosures stayed wider than the tolerance gate");
      wb = std::min<Bits>(kMaxBits, wb * 2);
    }
    if (!b) continue;  // language growth not yet above 1: cut too coarse

    Params target{*b, *a, BoundaryKind::Interior};
    try {
      target = make_params(*b, *a);
    } catch (const DomainError&) {
      continue;  // recovered point drifted outside the triangle
    } catch (const PrecisionExhausted&) {
      continue;  // boundary undecidable at this cut; a deeper cut moves it
    }
    if (target.boundary != BoundaryKind::Interior) continue;

    const Real err_beta = *b - params.beta;
    const Real err_alpha = abs(*a - params.alpha);
    if (err_beta.certainly_negative())
      throw InternalError("recovered slope fell below the input slope");
    if (!(err_beta.hi_double() < eps) || !(err_alpha.hi_double() < eps))
      continue;

    const std::size_t span =
        candidate.lower.preperiod_length() + candidate.lower.period_length() +
        candidate.upper.preperiod_length() + candidate.upper.period_length();
    const ValidationResult validated =
        validate_pair(target, candidate, std::max<std::size_t>(512, 10 * span),
                      wb);

    // Agreement length through letter k+1 backs the offset-error budget;
    // with the lower word unchanged the budget holds for any length.
    const std::size_t n_used = lower_trace ? lower_trace->k + 1 : 0;
    if (lower_trace) {
      const Real one = Real::integer(1, wb);
      const Real gap = params.beta - one;
      const Real budget =
          Real::integer(4, wb) * err_beta / (gap * gap) +
          Real::integer(6, wb) /
              (params.beta.pow_integer(static_cast<long>(n_used)) * gap);
      if (err_alpha.certainly_greater(budget))
        throw InternalError("offset error exceeded its derived budget");
    }

    const ConstraintMachine machine(validated.pair);
    SftCertificate certificate =
        forbidden_words(follower_automaton(machine), validated.pair, wb);

    return SftApproximation{params,
                            target,
                            validated.pair,
                            !validated.confirmed,
                            std::move(certificate),
                            err_beta,
                            err_alpha,
                            n_used,
                            lower_trace,
                            upper_trace};
  }
  throw NoProgress("no certified approximation within the cut cap");
}

}  // namespace betashift
