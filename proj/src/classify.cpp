#include "betashift/classify.hpp"

namespace betashift {

Classification classify_shift(const Params& params, std::size_t max_len,
                              Bits bits) {
  Classification result;
  result.max_len = max_len;
  std::optional<EventuallyPeriodicWord> lower, upper;
  switch (params.boundary) {
    case BoundaryKind::LowerEdge:
      // alpha = 0 fixes the plus orbit of 0 at 0.
      upper = EventuallyPeriodicWord({1}, {0});
      lower = detect_kneading_period(params, Side::Minus, max_len, bits);
      break;
    case BoundaryKind::UpperEdge:
      // alpha = 2 - beta fixes the minus orbit of 1 at 1.
      lower = EventuallyPeriodicWord({0}, {1});
      upper = detect_kneading_period(params, Side::Plus, max_len, bits);
      break;
    case BoundaryKind::Interior:
      lower = detect_kneading_period(params, Side::Minus, max_len, bits);
      if (lower) {
        upper = detect_kneading_period(params, Side::Plus, max_len, bits);
      }
      break;
  }
  if (!lower || !upper) return result;

  const WordPair pair{*lower, *upper};
  result.pair = pair;
  const AdmissibilityReport report = is_admissible(pair, bits);
  result.report = report;
  if (!report.admissible) return result;  // inconsistent candidate

  bool finite = false;
  switch (params.boundary) {
    case BoundaryKind::LowerEdge:
      finite = lower->purely_periodic();
      break;
    case BoundaryKind::UpperEdge:
      finite = upper->purely_periodic();
      break;
    case BoundaryKind::Interior:
      finite = lower->purely_periodic() && upper->purely_periodic();
      break;
  }
  if (!finite) {
    result.kind = ShiftClass::Sofic;
    return result;
  }
  result.certificate =
      forbidden_words(follower_automaton(ConstraintMachine(pair)), pair, bits);
  result.kind = ShiftClass::FiniteType;
  return result;
}

}  // namespace betashift
