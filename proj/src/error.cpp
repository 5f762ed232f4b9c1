#include "listdefect/error.hpp"

namespace listdefect {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MissingColor: return "MissingColor";
    case ErrorCode::ColorNotInList: return "ColorNotInList";
    case ErrorCode::MissingOrientation: return "MissingOrientation";
    case ErrorCode::BudgetViolation: return "BudgetViolation";
    case ErrorCode::RoundLimitExceeded: return "RoundLimitExceeded";
    case ErrorCode::NodeFailure: return "NodeFailure";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::GreedyExhausted: return "GreedyExhausted";
    case ErrorCode::ListTooSmall: return "ListTooSmall";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

bool is_fail_fast(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetViolation:
    case ErrorCode::RoundLimitExceeded:
    case ErrorCode::NodeFailure:
    case ErrorCode::ConditionViolated:
    case ErrorCode::CapExceeded:
    case ErrorCode::GreedyExhausted:
    case ErrorCode::ListTooSmall:
    case ErrorCode::EmptyList:
    case ErrorCode::InvariantViolation:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

BudgetViolation::BudgetViolation(int from_, int to_, std::size_t round_, std::uint64_t bits_,
                                 std::uint64_t budget_)
    : Error(ErrorCode::BudgetViolation,
            "edge " + std::to_string(from_) + "->" + std::to_string(to_) + " round " +
                std::to_string(round_) + " carries " + std::to_string(bits_) +
                " bits, budget " + std::to_string(budget_)),
      from(from_),
      to(to_),
      round(round_),
      bits(bits_),
      budget(budget_) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace listdefect
