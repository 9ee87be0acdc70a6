#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "betashift/words.hpp"

namespace betashift {

// An ordered pair of infinite words.  `lower` plays the role of the largest
// word beginning with 0 and `upper` the smallest word beginning with 1: the
// associated shift space consists of all words each of whose suffixes lies
// weakly between shift(upper) and lower, or weakly between upper and
// shift(lower).
struct WordPair {
  EventuallyPeriodicWord lower;
  EventuallyPeriodicWord upper;

  bool operator==(const WordPair&) const = default;
  std::string str() const { return lower.str() + " / " + upper.str(); }
};

// Deterministic finite-state tracker for the window conditions of a
// WordPair.
//
// After reading a prefix, each started suffix position is summarized by the
// set of bound suffixes it is still letter-for-letter equal to; positions
// with identical summaries behave identically forever and are merged, which
// keeps the reachable state set finite.  A position dies when every window
// it could still satisfy is violated; reading past that is a rejection.
//
// A state is `alive` when some infinite continuation avoids rejection
// forever.  Factors of the shift space are exactly the prefixes that end in
// an alive state.
class ConstraintMachine {
 public:
  explicit ConstraintMachine(WordPair pair);

  const WordPair& pair() const { return pair_; }
  std::uint32_t initial_state() const { return init_; }
  std::size_t state_count() const { return trans_.size(); }

  // nullopt = rejection.
  std::optional<std::uint32_t> transition(std::uint32_t state, Bit c) const;
  bool alive(std::uint32_t state) const { return alive_[state]; }
  bool language_empty() const { return !alive_[init_]; }

  // Whether w is a factor of the shift space.
  bool is_factor(const FiniteWord& w) const;

  // Number of length-n words no prefix of which is rejected.
  mpz_class count_surviving(std::size_t n) const;
  // Number of length-n factors of the shift space (surviving words with an
  // infinite continuation).
  mpz_class count_factors(std::size_t n) const;

 private:
  // A mode is one window a position might still satisfy: the suffix must
  // stay weakly above `low` and weakly below `high`.  kPassed marks a bound
  // already beaten strictly, which can never be violated later.
  static constexpr std::int32_t kPassed = -1;
  struct Mode {
    std::int32_t low;
    std::int32_t high;
  };
  struct WordEntry {
    EventuallyPeriodicWord word;
    Bit head;
    std::int32_t shifted = -2;  // lazily interned shift
  };

  std::uint32_t intern_word(const EventuallyPeriodicWord& w);
  std::int32_t shifted(std::int32_t word_id);
  std::uint32_t intern_mode(const Mode& m);
  std::uint32_t intern_key(std::vector<std::uint32_t> ids,
                           std::unordered_map<std::string, std::uint32_t>& map,
                           std::vector<std::vector<std::uint32_t>>& table);

  struct Advanced {
    bool dead = false;
    bool satisfied = false;
    Mode mode{kPassed, kPassed};
  };
  Advanced advance(const Mode& m, Bit c);

  // Computes one transition, interning any new state; kDeadState = rejection.
  std::uint32_t step(std::uint32_t state, Bit c);
  void explore();
  void compute_alive();
  mpz_class count(std::size_t n, bool factors_only) const;

  static constexpr std::uint32_t kDeadState = 0xffffffffu;

  WordPair pair_;
  std::vector<WordEntry> words_;
  std::unordered_map<std::string, std::uint32_t> word_ids_;
  std::vector<Mode> modes_;
  std::unordered_map<std::uint64_t, std::uint32_t> mode_ids_;
  std::vector<std::vector<std::uint32_t>> constraints_;  // sorted mode ids
  std::unordered_map<std::string, std::uint32_t> constraint_ids_;
  std::vector<std::vector<std::uint32_t>> states_;  // sorted constraint ids
  std::unordered_map<std::string, std::uint32_t> state_ids_;
  std::vector<std::array<std::uint32_t, 2>> trans_;
  std::vector<bool> alive_;
  std::uint32_t init_ = 0;
  // Un-advanced window modes every fresh suffix position starts from:
  // [shift(upper), lower] and [upper, shift(lower)].
  Mode window_a_{kPassed, kPassed};
  Mode window_b_{kPassed, kPassed};
};

// Number of length-n factors of the shift space of `pair`, by direct
// simulation of the window conditions.
mpz_class count_words_bruteforce(const WordPair& pair, std::size_t n);

}  // namespace betashift
