#pragma once

#include <cstddef>
#include <optional>

#include "betashift/admissibility.hpp"
#include "betashift/automata.hpp"
#include "betashift/dynamics.hpp"

namespace betashift {

enum class ShiftClass { FiniteType, Sofic, Undetermined };

struct Classification {
  ShiftClass kind = ShiftClass::Undetermined;
  std::size_t max_len = 0;  // orbit horizon the detection ran with
  std::optional<WordPair> pair;  // kneading pair, when detected
  std::optional<AdmissibilityReport> report;  // admissibility of that pair
  std::optional<SftCertificate> certificate;  // present for FiniteType
};

// Detects the kneading pair of the parameters and classifies the induced
// symbolic system.  In the interior, finite type requires both kneading
// words purely periodic; on an edge of the parameter triangle the opposite
// word is pinned structurally and only the free word decides.  Detection
// failures and inconsistent candidates come back Undetermined.
Classification classify_shift(const Params& params, std::size_t max_len,
                              Bits bits = kDefaultBits);

}  // namespace betashift
