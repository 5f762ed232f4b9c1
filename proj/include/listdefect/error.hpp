#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace listdefect {

enum class ErrorCode {
  InvalidArgument,
  Schema,
  Io,
  MissingColor,
  ColorNotInList,
  MissingOrientation,
  BudgetViolation,
  RoundLimitExceeded,
  NodeFailure,
  ConditionViolated,
  CapExceeded,
  GreedyExhausted,
  ListTooSmall,
  EmptyList,
  InfeasibleParams,
  InvariantViolation,
};

const char* to_string(ErrorCode code);

// Codes that end a run under the fail-fast contract, as opposed to misuse or IO.
bool is_fail_fast(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class BudgetViolation : public Error {
 public:
  BudgetViolation(int from, int to, std::size_t round, std::uint64_t bits,
                  std::uint64_t budget);
  int from;
  int to;
  std::size_t round;
  std::uint64_t bits;
  std::uint64_t budget;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace listdefect
