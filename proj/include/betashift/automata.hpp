#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <vector>

#include "betashift/real.hpp"
#include "betashift/subshift.hpp"
#include "betashift/words.hpp"

namespace betashift {

// A deterministic graph presentation of the shift space of a WordPair.
//
// HigherBlock: vertices are the allowed words of some block length L
// (`window`), edges follow (L-1)-letter overlaps, and every vertex lies on a
// bi-infinite path.  Length-n factors for n >= L are in bijection with paths
// of n - L edges.
//
// Follower: vertices are the alive states of the ConstraintMachine and
// factors are in bijection with paths of n edges from `start`.  This form
// stays small for long-period pairs where block coding would be exponential.
struct SubshiftAutomaton {
  enum class Kind { HigherBlock, Follower };

  Kind kind = Kind::Follower;
  std::size_t window = 0;          // block length L; HigherBlock only
  std::vector<FiniteWord> labels;  // vertex labels; HigherBlock only
  // next[v][bit] = target vertex, or -1 for no edge.
  std::vector<std::array<std::int64_t, 2>> next;
  std::uint32_t start = 0;  // Follower only

  std::size_t state_count() const { return next.size(); }
};

// Higher-block presentation found by verify-and-escalate: starting from
// block length max of the two effective word lengths plus one, builds the
// allowed-block graph, trims it to bi-infinite states, and accepts the first
// L whose path counts reproduce the machine counts for all n <= 2L+2.
// Throws EscalationFailed past four times the combined effective length, or
// when the vertex set would be astronomically large.
SubshiftAutomaton build_automaton(const WordPair& pair);

// The alive-state graph of the constraint machine.
SubshiftAutomaton follower_automaton(const ConstraintMachine& machine);

// Exact number of length-n factors presented by the automaton.
mpz_class count_words_matrix(const SubshiftAutomaton& aut, std::size_t n);

// Enclosure of the Perron root of the automaton's adjacency matrix.
// Strongly connected components that are single cycles contribute exactly 1
// and the empty automaton yields exactly 0; any other component is enclosed
// by two-sided eigenvalue bounds from power iteration, tightened until the
// width is at most 2^-(bits/2).
Real spectral_radius(const SubshiftAutomaton& aut, Bits bits);

// log of the spectral radius: the exponential growth rate of the factor
// counts.  Exactly 0 for an automaton whose components are all cycles, and
// for the empty automaton (by convention).
Real growth_rate(const SubshiftAutomaton& aut, Bits bits);

// A finite-type certificate: the language equals all words avoiding the
// listed factors.
struct SftCertificate {
  WordPair pair;
  std::vector<FiniteWord> forbidden;  // minimal, mutually incomparable
  std::size_t memory = 0;             // longest forbidden word
  Real entropy;
};

// Computes the minimal forbidden words of the pair's shift space and proves
// completeness by checking language equality between the avoid-set automaton
// and the machine (product search for a shortest discrepancy; any found word
// is itself minimalized and added).  Throws EscalationFailed if the set does
// not close off, which happens when the language is not of finite type.
SftCertificate forbidden_words(const SubshiftAutomaton& aut,
                               const WordPair& pair, Bits bits = kDefaultBits);

}  // namespace betashift
