#include "chaincert/errors.hpp"

namespace chaincert {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::non_square: return "NonSquare";
    case Errc::negative_entry: return "NegativeEntry";
    case Errc::column_sum_off: return "ColumnSumOff";
    case Errc::not_ergodic: return "NotErgodic";
    case Errc::not_reversible: return "NotReversible";
    case Errc::singular_system: return "SingularSystem";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::too_small: return "TooSmall";
    case Errc::too_large: return "TooLarge";
    case Errc::no_valid_prefix: return "NoValidPrefix";
    case Errc::zero_proper_vector: return "ZeroProperVector";
    case Errc::mass_exceeds_half: return "MassExceedsHalf";
    case Errc::not_an_eigenvector: return "NotAnEigenvector";
    case Errc::sandwich_violation: return "SandwichViolation";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::disconnected: return "Disconnected";
    case Errc::periodic: return "Periodic";
    case Errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

bool is_validation_error(Errc c) {
  switch (c) {
    case Errc::non_square:
    case Errc::negative_entry:
    case Errc::column_sum_off:
    case Errc::not_ergodic:
    case Errc::not_reversible:
    case Errc::too_small:
    case Errc::too_large:
    case Errc::out_of_range:
    case Errc::disconnected:
    case Errc::periodic:
    case Errc::parse_error:
    case Errc::dimension_mismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace chaincert
