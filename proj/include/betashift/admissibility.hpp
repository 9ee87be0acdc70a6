#pragma once

#include <optional>
#include <utility>

#include "betashift/real.hpp"
#include "betashift/subshift.hpp"
#include "betashift/words.hpp"

namespace betashift {

// Membership of xi in the one-sided coding region of a kneading pair: every
// shift of xi must fall into the window below the lower word or the window
// above the upper word.  Side::Plus keeps the first window open at the lower
// word and the second closed; Side::Minus swaps the strictness.  Requires
// lower < upper.
bool member_omega(const WordPair& pair, const EventuallyPeriodicWord& xi,
                  Side side);

// The lower word starts with 0 and the upper word starts with 1.
bool check_condition1(const WordPair& pair);

// The lower word lies in its own minus region and the upper word in its own
// plus region; false whenever the pair is not strictly ordered.
bool check_condition2(const WordPair& pair);

// Positive exponential growth of the factor language, returned together
// with the certified growth-rate enclosure used as witness.
std::pair<bool, Real> check_condition3(const WordPair& pair,
                                       Bits bits = kDefaultBits);

// No self-consistent shorter periodic pair tiles both words as block
// concatenations; on failure the returned blocks generate the offending
// sub-pair.
std::pair<bool, std::optional<std::pair<FiniteWord, FiniteWord>>>
check_condition4(const WordPair& pair);

struct AdmissibilityReport {
  bool condition1 = false;
  bool condition2 = false;
  bool condition3 = false;
  bool condition4 = false;
  Real entropy = Real(kDefaultBits);  // growth-rate witness for condition 3
  std::optional<std::pair<FiniteWord, FiniteWord>> witness;  // condition 4
  bool admissible = false;
  bool periodically_admissible = false;
};

// Evaluates all four conditions.  A pair is admissible when every condition
// holds, and periodically admissible when furthermore both words are purely
// periodic.
AdmissibilityReport is_admissible(const WordPair& pair,
                                  Bits bits = kDefaultBits);

}  // namespace betashift
