#include "betashift/admissibility.hpp"

#include <set>
#include <vector>

#include "betashift/automata.hpp"
#include "betashift/errors.hpp"

namespace betashift {

namespace {

bool leq(const EventuallyPeriodicWord& a, const EventuallyPeriodicWord& b) {
  return lex_compare(a, b) != std::strong_ordering::greater;
}

bool lt(const EventuallyPeriodicWord& a, const EventuallyPeriodicWord& b) {
  return lex_compare(a, b) == std::strong_ordering::less;
}

// Whether the word is an infinite concatenation of the two blocks.  The
// block's first letter must match the letter at the cut, so the scan is
// forced; revisiting a cut position inside the periodic tail certifies an
// infinite continuation.
bool parses_into_blocks(const EventuallyPeriodicWord& w,
                        const FiniteWord& zero_block,
                        const FiniteWord& one_block) {
  const std::size_t pre = w.preperiod_length();
  const std::size_t per = w.period_length();
  std::set<std::size_t> seen;
  std::size_t pos = 0;
  while (true) {
    const std::size_t canon = pos < pre ? pos : pre + (pos - pre) % per;
    if (!seen.insert(canon).second) return true;
    const FiniteWord& block = w.at(canon) == 0 ? zero_block : one_block;
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (w.at(canon + i) != block.at(i)) return false;
    }
    pos = canon + block.size();
  }
}

// Prefixes of the word that could serve as a tiling block: the first block
// of any tiling must be a prefix, and longer blocks cannot recur within one
// period of the tail.
std::vector<FiniteWord> block_candidates(const EventuallyPeriodicWord& w,
                                         Bit first, Bit second) {
  std::vector<FiniteWord> out;
  if (w.at(0) != first || w.at(1) != second) return out;
  const std::size_t limit = w.preperiod_length() + 2 * w.period_length();
  for (std::size_t len = 3; len <= limit; ++len) {
    out.push_back(prefix(w, len));
  }
  return out;
}

}  // namespace

bool member_omega(const WordPair& pair, const EventuallyPeriodicWord& xi,
                  Side side) {
  if (!lt(pair.lower, pair.upper)) {
    throw DomainError("membership regions require lower < upper");
  }
  const EventuallyPeriodicWord shifted_lower = shift_word(pair.lower);
  const EventuallyPeriodicWord shifted_upper = shift_word(pair.upper);
  const std::size_t shifts = xi.preperiod_length() + xi.period_length();
  for (std::size_t n = 0; n < shifts; ++n) {
    const EventuallyPeriodicWord t = shift_word(xi, n);
    bool ok;
    if (side == Side::Plus) {
      ok = (leq(shifted_upper, t) && lt(t, pair.lower)) ||
           (leq(pair.upper, t) && leq(t, shifted_lower));
    } else {
      ok = (leq(shifted_upper, t) && leq(t, pair.lower)) ||
           (lt(pair.upper, t) && leq(t, shifted_lower));
    }
    if (!ok) return false;
  }
  return true;
}

bool check_condition1(const WordPair& pair) {
  return pair.lower.at(0) == 0 && pair.upper.at(0) == 1;
}

bool check_condition2(const WordPair& pair) {
  if (!lt(pair.lower, pair.upper)) return false;
  return member_omega(pair, pair.lower, Side::Minus) &&
         member_omega(pair, pair.upper, Side::Plus);
}

std::pair<bool, Real> check_condition3(const WordPair& pair, Bits bits) {
  const ConstraintMachine machine(pair);
  const Real rate = growth_rate(follower_automaton(machine), bits);
  return {rate.certainly_positive(), rate};
}

std::pair<bool, std::optional<std::pair<FiniteWord, FiniteWord>>>
check_condition4(const WordPair& pair) {
  for (const FiniteWord& xi : block_candidates(pair.lower, 0, 1)) {
    for (const FiniteWord& zeta : block_candidates(pair.upper, 1, 0)) {
      if (!parses_into_blocks(pair.lower, xi, zeta)) continue;
      if (!parses_into_blocks(pair.upper, xi, zeta)) continue;
      const WordPair sub{EventuallyPeriodicWord({}, xi.bits),
                         EventuallyPeriodicWord({}, zeta.bits)};
      if (sub == pair) continue;
      if (!check_condition2(sub)) continue;
      return {false, std::make_pair(xi, zeta)};
    }
  }
  return {true, std::nullopt};
}

AdmissibilityReport is_admissible(const WordPair& pair, Bits bits) {
  const bool c1 = check_condition1(pair);
  const bool c2 = check_condition2(pair);
  const auto [c3, rate] = check_condition3(pair, bits);
  const auto [c4, witness] = check_condition4(pair);
  const bool admissible = c1 && c2 && c3 && c4;
  const bool purely =
      pair.lower.purely_periodic() && pair.upper.purely_periodic();
  return AdmissibilityReport{c1,      c2,      c3,         c4,
                             rate,    witness, admissible,
                             admissible && purely};
}

}  // namespace betashift
