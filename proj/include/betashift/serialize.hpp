#pragma once

#include <json.hpp>

#include "betashift/admissibility.hpp"
#include "betashift/approximation.hpp"
#include "betashift/automata.hpp"
#include "betashift/classify.hpp"

namespace betashift {

// JSON views of the result types.  Words serialize as their literal
// grammar, decimals as 20-significant-digit strings (entropy additionally
// as a plain number for quick reading).

nlohmann::json certificate_json(const SftCertificate& certificate);

nlohmann::json report_json(const AdmissibilityReport& report);

nlohmann::json classification_json(const Classification& classification);

nlohmann::json approximation_json(const SftApproximation& approximation);

// Human-readable status token: finite_type, sofic or undetermined.
const char* shift_class_name(ShiftClass kind);

}  // namespace betashift
