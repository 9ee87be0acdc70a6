#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "betashift/automata.hpp"
#include "betashift/dynamics.hpp"
#include "betashift/real.hpp"
#include "betashift/subshift.hpp"
#include "betashift/words.hpp"

namespace betashift {

// Result of closing a kneading prefix into a purely periodic word.  The
// positions are 1-based: n is the requested cut, j the minimal self-overlap
// of the prefix, and k the closing position; the result repeats the first k
// letters and agrees with the input through letter k+1.
struct PeriodizationTrace {
  std::size_t n = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  EventuallyPeriodicWord result;
};

// Supplies a digit prefix of at least the requested length, or nothing when
// the digits cannot be extended further.
using DigitSource = std::function<std::optional<FiniteWord>(std::size_t)>;

// Closes a prefix of a lower kneading word into a purely periodic word that
// dominates it.  Letter n must be 0; j >= 1 is minimal with the prefix
// matching itself at offset j through letter n; k >= n is minimal with
// letter k+1 reading 0 and letter k-j+1 reading 1.  More digits are pulled
// through `extend` as the scan for k outgrows the prefix.  Throws
// DomainError for an unusable cut and CallbackExhausted when the digits run
// out before the construction closes.
PeriodizationTrace periodize_lower(const FiniteWord& prefix, std::size_t n,
                                   const DigitSource& extend = {});

// Mirror construction for upper kneading words: letter n must be 1 and the
// result is dominated by the input.  Realized by complementing, periodizing
// low, and complementing back.
PeriodizationTrace periodize_upper(const FiniteWord& prefix, std::size_t n,
                                   const DigitSource& extend = {});

// Convenience entries for words already known letter by letter.  A purely
// periodic word needs no periodization: AlreadyPeriodic.
PeriodizationTrace periodize_lower(const EventuallyPeriodicWord& word,
                                   std::size_t n);
PeriodizationTrace periodize_upper(const EventuallyPeriodicWord& word,
                                   std::size_t n);

// The slope whose logarithm is the growth rate of the pair's language,
// enclosed through the spectral radius of the follower automaton.
Real recover_beta(const WordPair& pair, Bits bits = kDefaultBits);

// The offset that makes the projection of the word equal the critical
// point: 1 - b + b(b-1) * sum_k word_k b^(-k).
Real recover_alpha(const Real& beta, const EventuallyPeriodicWord& lower,
                   Bits bits = kDefaultBits);

struct ValidationResult {
  bool confirmed = false;
  WordPair pair;  // the input pair when confirmed, else the recomputed one
  Real beta;      // recovered slope of the returned pair
  Real alpha;     // recovered offset of the returned pair
};

// Recomputes the kneading invariants at the given parameters and compares
// them with the pair.  A mismatch returns the recomputed purely periodic
// pair together with its own recovered parameters; invariants that do not
// come out purely periodic within max_len raise ReductionFailed.
ValidationResult validate_pair(const Params& params, const WordPair& pair,
                               std::size_t max_len = 512,
                               Bits bits = kDefaultBits);

struct SftApproximation {
  Params source;              // the parameters being approximated
  Params target;              // recovered parameters, inside the triangle
  WordPair pair;              // validated periodically admissible pair
  bool reduced = false;       // pair came out of a recomputation mismatch
  SftCertificate certificate;  // forbidden words and entropy of the pair
  Real err_beta;              // target slope minus source slope
  Real err_alpha;             // |target offset - source offset|
  std::size_t n_used = 0;     // agreement length backing the error budget
  std::optional<PeriodizationTrace> lower_trace;  // absent when unchanged
  std::optional<PeriodizationTrace> upper_trace;
};

// Produces a periodically admissible pair whose recovered parameters lie
// certifiably within eps of the given interior parameters.  Cuts are
// scanned in increasing order and the first certified success is returned;
// enclosure widths must stay below eps/10 or precision is escalated.
// Throws NoProgress when the cut cap is reached without success.
SftApproximation approximate_sft(const Params& params, double eps,
                                 Bits bits = kDefaultBits,
                                 std::size_t cut_cap = 2000);

}  // namespace betashift
