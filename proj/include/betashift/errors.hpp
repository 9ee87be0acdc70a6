#pragma once

#include <stdexcept>
#include <string>

namespace betashift {

// Base type for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The working precision cannot decide a comparison or keep an enclosure
// meaningful.  Retrying the whole computation at higher precision is the
// intended recovery; see with_precision().
struct PrecisionExhausted : Error {
  using Error::Error;
};

// The block-automaton construction hit its block-length or vertex-count cap
// before verification succeeded.
struct EscalationFailed : Error {
  using Error::Error;
};

// A letter provider ran out of letters before the algorithm finished.
struct CallbackExhausted : Error {
  using Error::Error;
};

// Periodization was asked to cut a word that is already periodic from the
// requested position on, so no strictly smaller system exists.
struct AlreadyPeriodic : Error {
  using Error::Error;
};

// A candidate pair could neither be confirmed admissible nor reduced to an
// admissible pair.
struct ReductionFailed : Error {
  using Error::Error;
};

// The approximation loop exhausted its cut-index budget without certifying
// a result within the requested tolerance.
struct NoProgress : Error {
  using Error::Error;
};

// Arguments outside the domain of the requested operation.
struct DomainError : Error {
  using Error::Error;
};

// An internal invariant failed.  Indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace betashift
