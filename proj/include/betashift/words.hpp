#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "betashift/errors.hpp"

namespace betashift {

// A letter of the two-symbol alphabet; always 0 or 1.
using Bit = std::uint8_t;

using Ordering = std::strong_ordering;

// Selects one of the two transformations in a pair that differ only at the
// critical point: Plus sends the critical point to 0 (digit 1 on ties),
// Minus sends it to 1 (digit 0 on ties).
enum class Side { Plus, Minus };

// A finite 0/1 word.
struct FiniteWord {
  std::vector<Bit> bits;

  FiniteWord() = default;
  explicit FiniteWord(std::vector<Bit> b);

  // Parses a plain bit string such as "0110".  Empty input is allowed.
  static FiniteWord parse(std::string_view text);

  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  Bit at(std::size_t i) const { return bits.at(i); }

  std::string str() const;

  auto operator<=>(const FiniteWord&) const = default;
};

// An eventually periodic one-sided infinite 0/1 word, stored as a preperiod
// followed by an infinitely repeated period.
//
// Invariant: the period is primitive and the preperiod does not end with the
// final period letter.  This canonical form is unique, so structural equality
// coincides with equality of letter sequences.
class EventuallyPeriodicWord {
 public:
  // Canonicalizes on construction.  The period must be non-empty.
  EventuallyPeriodicWord(std::vector<Bit> preperiod, std::vector<Bit> period);

  // Parses "pre(per)" notation: "(01)", "0(1)", "011(0110)".  A plain finite
  // bit string is rejected; infinite words must spell out their period.
  static EventuallyPeriodicWord parse(std::string_view text);

  const std::vector<Bit>& preperiod() const { return pre_; }
  const std::vector<Bit>& period() const { return per_; }
  std::size_t preperiod_length() const { return pre_.size(); }
  std::size_t period_length() const { return per_.size(); }
  bool purely_periodic() const { return pre_.empty(); }

  // Letter at 0-based position i.
  Bit at(std::size_t i) const {
    return i < pre_.size() ? pre_[i] : per_[(i - pre_.size()) % per_.size()];
  }

  std::string str() const;

  bool operator==(const EventuallyPeriodicWord&) const = default;

 private:
  std::vector<Bit> pre_;
  std::vector<Bit> per_;
};

// Drops the first k letters.
EventuallyPeriodicWord shift_word(const EventuallyPeriodicWord& w,
                                  std::size_t k = 1);

// Flips every letter.
EventuallyPeriodicWord complement(const EventuallyPeriodicWord& w);
FiniteWord complement(const FiniteWord& w);

// Prefixes a finite word onto an infinite one.
EventuallyPeriodicWord concat(const FiniteWord& head,
                              const EventuallyPeriodicWord& tail);

// First n letters as a finite word.
FiniteWord prefix(const EventuallyPeriodicWord& w, std::size_t n);

// Lexicographic order of the full infinite words.  Decided by comparing at
// most max(|preA|, |preB|) + lcm(|perA|, |perB|) letters.
Ordering lex_compare(const EventuallyPeriodicWord& a,
                     const EventuallyPeriodicWord& b);

// 1-based position of the first differing letter, or 0 when the words are
// equal.
std::size_t first_difference(const EventuallyPeriodicWord& a,
                             const EventuallyPeriodicWord& b);

// 2^(1-m) where m = first_difference(a, b), and 0 for equal words.
double word_metric(const EventuallyPeriodicWord& a,
                   const EventuallyPeriodicWord& b);

}  // namespace betashift
