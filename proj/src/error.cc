#include "fpclab/error.h"

namespace fpclab {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonPrimeModulus: return "NonPrimeModulus";
    case ErrorKind::kModulusTooSmall: return "ModulusTooSmall";
    case ErrorKind::kDuplicatePoint: return "DuplicatePoint";
    case ErrorKind::kArityMismatch: return "ArityMismatch";
    case ErrorKind::kFieldMismatch: return "FieldMismatch";
    case ErrorKind::kFieldExhausted: return "FieldExhausted";
    case ErrorKind::kFieldTooSmall: return "FieldTooSmall";
    case ErrorKind::kDivisionByZero: return "DivisionByZero";
    case ErrorKind::kInvalidCoalition: return "InvalidCoalition";
    case ErrorKind::kInvalidSecurity: return "InvalidSecurity";
    case ErrorKind::kInvalidParameter: return "InvalidParameter";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kEmptyDatabase: return "EmptyDatabase";
    case ErrorKind::kNotBinary: return "NotBinary";
    case ErrorKind::kIncompleteShares: return "IncompleteShares";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kWrongMode: return "WrongMode";
    case ErrorKind::kQueryBudgetExceeded: return "QueryBudgetExceeded";
    case ErrorKind::kCommitBudgetExceeded: return "CommitBudgetExceeded";
    case ErrorKind::kPreconditionUnmet: return "PreconditionUnmet";
    case ErrorKind::kSampleExceedsPopulation: return "SampleExceedsPopulation";
    case ErrorKind::kOutputDimensionMismatch: return "OutputDimensionMismatch";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace fpclab
