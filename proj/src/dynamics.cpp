#include "betashift/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "betashift/errors.hpp"

namespace betashift {

namespace {

// beta*x + alpha - digit; on the upper edge the identity alpha = 2 - beta
// is substituted so that the image of an exact 1 stays exact.
Real map_image(const Params& p, const Real& x, Bit digit) {
  const Bits bits = p.beta.precision();
  if (p.boundary == BoundaryKind::UpperEdge) {
    return p.beta * (x - Real::integer(1, bits)) +
           Real::integer(2 - digit, bits);
  }
  return p.beta * x + p.alpha - Real::integer(digit, bits);
}

// Projections of every shift of the candidate must reproduce the critical
// orbit: start at the critical point and never certainly contradict a
// digit, with exact ties allowed only on the trusted branch.
bool confirm_candidate(const Params& params,
                       const EventuallyPeriodicWord& word, Bit tie_digit,
                       const Real& critical, Bits bits) {
  if (!project(params, word, bits).overlaps(critical)) return false;
  const std::size_t span = word.preperiod_length() + word.period_length();
  for (std::size_t i = 0; i < span; ++i) {
    const Real x = project(params, shift_word(word, i), bits);
    const Bit digit = word.at(i);
    if (digit == 0 && x.certainly_greater(critical)) return false;
    if (digit == 1 && x.certainly_less(critical)) return false;
    if (digit != tie_digit &&
        compare_decide(x, critical) == Decision::Equal) {
      return false;
    }
  }
  return true;
}

}  // namespace

Params make_params(const Real& beta, const Real& alpha,
                   std::optional<BoundaryKind> declared) {
  const Bits bits = std::max(beta.precision(), alpha.precision());
  const Real one = Real::integer(1, bits);
  const Real two = Real::integer(2, bits);
  switch (compare_decide(beta, one)) {
    case Decision::Greater:
      break;
    case Decision::Undecided:
      throw PrecisionExhausted("cannot separate beta from 1");
    default:
      throw DomainError("beta must exceed 1");
  }
  switch (compare_decide(beta, two)) {
    case Decision::Less:
      break;
    case Decision::Undecided:
      throw PrecisionExhausted("cannot separate beta from 2");
    default:
      throw DomainError("beta must stay below 2");
  }
  if (declared == BoundaryKind::UpperEdge) {
    const Real edge = two - beta;
    if (!alpha.overlaps(edge)) {
      throw DomainError("the upper edge requires alpha = 2 - beta");
    }
    return Params{beta, intersect(alpha, edge), BoundaryKind::UpperEdge};
  }
  if (declared == BoundaryKind::LowerEdge) {
    if (compare_decide(alpha, Real(bits)) != Decision::Equal) {
      throw DomainError("the lower edge requires alpha = 0 exactly");
    }
    return Params{beta, Real(bits), BoundaryKind::LowerEdge};
  }
  BoundaryKind kind = BoundaryKind::Interior;
  switch (compare_decide(alpha, Real(bits))) {
    case Decision::Greater:
      break;
    case Decision::Equal:
      kind = BoundaryKind::LowerEdge;
      break;
    case Decision::Undecided:
      throw PrecisionExhausted("cannot separate alpha from 0");
    default:
      throw DomainError("alpha must not be negative");
  }
  switch (compare_decide(alpha, two - beta)) {
    case Decision::Less:
      break;
    case Decision::Equal:
      kind = BoundaryKind::UpperEdge;
      break;
    case Decision::Undecided:
      throw PrecisionExhausted("cannot separate alpha from 2 - beta");
    default:
      throw DomainError("alpha must not exceed 2 - beta");
  }
  return Params{beta, alpha, kind};
}

Real critical_point(const Params& params) {
  const Real one = Real::integer(1, params.beta.precision());
  if (params.boundary == BoundaryKind::UpperEdge) {
    return one - one / params.beta;
  }
  return (one - params.alpha) / params.beta;
}

std::pair<Real, Bit> apply_map(const Params& params, const Real& x,
                               Side side) {
  const Real critical = critical_point(params);
  Bit digit = 0;
  switch (compare_decide(x, critical)) {
    case Decision::Less:
      digit = 0;
      break;
    case Decision::Greater:
      digit = 1;
      break;
    case Decision::Equal:
      digit = side == Side::Plus ? 1 : 0;
      break;
    case Decision::Undecided:
      throw PrecisionExhausted("branch of the map is undecidable");
  }
  return {map_image(params, x, digit), digit};
}

FiniteWord expand(const Params& params, const Real& x, Side side,
                  std::size_t n) {
  std::vector<Bit> digits;
  digits.reserve(n);
  Real cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    auto [next, digit] = apply_map(params, cur, side);
    digits.push_back(digit);
    cur = next;
  }
  return FiniteWord(std::move(digits));
}

FiniteWord kneading(const Params& params, Side side, std::size_t n) {
  if (n == 0) return FiniteWord{};
  const Bits bits = params.beta.precision();
  const Bit first = side == Side::Plus ? 1 : 0;
  const Real seed =
      side == Side::Plus ? Real(bits) : Real::integer(1, bits);
  const FiniteWord tail = expand(params, seed, side, n - 1);
  std::vector<Bit> digits{first};
  digits.insert(digits.end(), tail.bits.begin(), tail.bits.end());
  return FiniteWord(std::move(digits));
}

Real project(const Params& params, const EventuallyPeriodicWord& xi,
             Bits bits) {
  const Real one = Real::integer(1, bits);
  const Real inv = one / params.beta;
  Real head(bits);
  Real power = one;
  for (std::size_t k = 0; k < xi.preperiod_length(); ++k) {
    power = power * inv;
    if (xi.at(k) == 1) head = head + power;
  }
  Real cycle(bits);
  Real cycle_power = one;
  for (std::size_t j = 0; j < xi.period_length(); ++j) {
    cycle_power = cycle_power * inv;
    if (xi.at(xi.preperiod_length() + j) == 1) cycle = cycle + cycle_power;
  }
  const Real tail = power * cycle / (one - cycle_power);
  return params.alpha / (one - params.beta) + head + tail;
}

Real project_prefix(const Params& params, const FiniteWord& prefix,
                    Bits bits) {
  const Real one = Real::integer(1, bits);
  const Real inv = one / params.beta;
  Real head(bits);
  Real power = one;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    power = power * inv;
    if (prefix.at(k) == 1) head = head + power;
  }
  const Real base = params.alpha / (one - params.beta) + head;
  // The unseen letters contribute between 0 and power/(beta-1).
  return Real::span(base, base + power / (params.beta - one));
}

std::optional<EventuallyPeriodicWord> detect_kneading_period(
    const Params& params, Side side, std::size_t max_len, Bits bits) {
  const Real critical = critical_point(params);
  const Bit tie_digit = side == Side::Plus ? 1 : 0;
  const double width_cap = std::ldexp(1.0, -static_cast<int>(bits) / 4);
  std::vector<Real> orbit;
  std::vector<Bit> digits;
  orbit.push_back(side == Side::Plus ? Real(bits)
                                     : Real::integer(1, bits));
  while (orbit.size() <= max_len) {
    Bit digit = tie_digit;
    switch (compare_decide(orbit.back(), critical)) {
      case Decision::Less:
        digit = 0;
        break;
      case Decision::Greater:
        digit = 1;
        break;
      default:
        // Exact tie, or unresolved: trust the tie branch and let the
        // candidate confirmation arbitrate.
        digit = tie_digit;
        break;
    }
    digits.push_back(digit);
    orbit.push_back(map_image(params, orbit.back(), digit));
    const std::size_t m = orbit.size() - 1;
    if (orbit[m].width() > width_cap) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (!orbit[j].overlaps(orbit[m])) continue;
      std::vector<Bit> pre{tie_digit};
      pre.insert(pre.end(), digits.begin(),
                 digits.begin() + static_cast<std::ptrdiff_t>(j));
      const std::vector<Bit> per(
          digits.begin() + static_cast<std::ptrdiff_t>(j), digits.end());
      const EventuallyPeriodicWord candidate(pre, per);
      if (confirm_candidate(params, candidate, tie_digit, critical, bits)) {
        return candidate;
      }
    }
  }
  return std::nullopt;
}

}  // namespace betashift
