#include "evd/error.hpp"

namespace evd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::RetriesExhausted: return "RetriesExhausted";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::IdentityViolated: return "IdentityViolated";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace evd
