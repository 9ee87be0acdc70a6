#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "betashift/real.hpp"
#include "betashift/words.hpp"

namespace betashift {

enum class BoundaryKind { Interior, LowerEdge, UpperEdge };

// Map parameters: slope beta in (1,2) and offset alpha in [0, 2-beta].  The
// boundary tag records when alpha sits exactly on an edge of the parameter
// triangle; the arithmetic then uses the edge identity so that orbits
// through the fixed endpoints stay exact.
struct Params {
  Real beta;
  Real alpha;
  BoundaryKind boundary = BoundaryKind::Interior;
};

// Validates the parameters and infers the boundary tag when decidable.  A
// declared LowerEdge requires alpha = 0 exactly; a declared UpperEdge
// replaces alpha by 2 - beta.  Throws DomainError for parameters certainly
// outside the triangle and PrecisionExhausted when validity is undecidable
// at the given precision.
Params make_params(const Real& beta, const Real& alpha,
                   std::optional<BoundaryKind> declared = std::nullopt);

// The critical point (1 - alpha) / beta separating the two branches.
Real critical_point(const Params& params);

// One application of the mod-1 map: returns the image beta*x + alpha -
// digit together with the branch digit.  The digit is 0 below the critical
// point and 1 above; exactly at the critical point Side::Plus takes digit 1
// (image 0) and Side::Minus digit 0 (image 1).  Throws PrecisionExhausted
// when the branch is undecidable.
std::pair<Real, Bit> apply_map(const Params& params, const Real& x,
                               Side side);

// The first n itinerary digits of x under the chosen branch convention.
FiniteWord expand(const Params& params, const Real& x, Side side,
                  std::size_t n);

// The first n letters of the kneading word: the itinerary of the critical
// point through its tie branch, which is 0 followed by the minus orbit of 1
// or 1 followed by the plus orbit of 0.
FiniteWord kneading(const Params& params, Side side, std::size_t n);

// Value of the word under the parameter projection
// alpha/(1-beta) + sum_k xi_k beta^(-k), evaluated in closed form.
Real project(const Params& params, const EventuallyPeriodicWord& xi,
             Bits bits);

// Enclosure of the projection over every infinite extension of the prefix.
Real project_prefix(const Params& params, const FiniteWord& prefix,
                    Bits bits);

// Searches the critical orbit for an eventually periodic kneading word.  A
// recurrence of orbit enclosures proposes a candidate, which is kept only
// when the projections of its shifts reproduce the orbit without
// contradicting any digit; ties against the critical point are taken on
// trust, so the result is a certification at the working precision rather
// than an exact proof.  Returns the full kneading word (tie digit included)
// or nullopt when no candidate is confirmed within max_len orbit steps.
std::optional<EventuallyPeriodicWord> detect_kneading_period(
    const Params& params, Side side, std::size_t max_len, Bits bits);

}  // namespace betashift
