#include "betashift/serialize.hpp"

#include <json.hpp>

namespace betashift {

namespace {

using nlohmann::json;

json pair_json(const WordPair& pair) {
  return json::array({pair.lower.str(), pair.upper.str()});
}

json trace_json(const std::optional<PeriodizationTrace>& trace) {
  if (!trace) return nullptr;
  return json{{"n", trace->n},
              {"j", trace->j},
              {"k", trace->k},
              {"result", trace->result.str()}};
}

}  // namespace

nlohmann::json certificate_json(const SftCertificate& certificate) {
  json forbidden = json::array();
  for (const FiniteWord& w : certificate.forbidden) forbidden.push_back(w.str());
  return json{{"pair", pair_json(certificate.pair)},
              {"forbidden", std::move(forbidden)},
              {"memory", certificate.memory},
              {"entropy", certificate.entropy.to_double()},
              {"entropy_enclosure",
               json::array({certificate.entropy.lo_str(),
                            certificate.entropy.hi_str()})}};
}

nlohmann::json report_json(const AdmissibilityReport& report) {
  json witness = nullptr;
  if (report.witness)
    witness = json::array(
        {report.witness->first.str(), report.witness->second.str()});
  return json{{"cond1", report.condition1},
              {"cond2", report.condition2},
              {"cond3", report.condition3},
              {"cond4", report.condition4},
              {"entropy", report.entropy.to_double()},
              {"witness", std::move(witness)},
              {"admissible", report.admissible},
              {"periodically_admissible", report.periodically_admissible}};
}

nlohmann::json classification_json(const Classification& classification) {
  json out{{"status", shift_class_name(classification.kind)},
           {"max_len", classification.max_len}};
  out["pair"] =
      classification.pair ? pair_json(*classification.pair) : json(nullptr);
  out["report"] = classification.report ? report_json(*classification.report)
                                        : json(nullptr);
  out["certificate"] = classification.certificate
                           ? certificate_json(*classification.certificate)
                           : json(nullptr);
  return out;
}

nlohmann::json approximation_json(const SftApproximation& approximation) {
  return json{
      {"source",
       {{"beta", approximation.source.beta.str()},
        {"alpha", approximation.source.alpha.str()}}},
      {"target",
       {{"b", approximation.target.beta.str()},
        {"a", approximation.target.alpha.str()}}},
      {"pair", pair_json(approximation.pair)},
      {"reduced", approximation.reduced},
      {"err_beta", approximation.err_beta.hi_str()},
      {"err_alpha", approximation.err_alpha.hi_str()},
      {"n_used", approximation.n_used},
      {"lower_trace", trace_json(approximation.lower_trace)},
      {"upper_trace", trace_json(approximation.upper_trace)},
      {"certificate", certificate_json(approximation.certificate)}};
}

const char* shift_class_name(ShiftClass kind) {
  switch (kind) {
    case ShiftClass::FiniteType:
      return "finite_type";
    case ShiftClass::Sofic:
      return "sofic";
    case ShiftClass::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

}  // namespace betashift
