#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace subwit {

enum class ErrorCode {
  DimensionMismatch,
  NonUnitary,
  NonHermitian,
  NonHermitianObservable,
  NotPositive,
  InvalidMatrix,
  InvalidState,
  InvalidSpec,
  InvalidExcitation,
  OutOfRange,
  LengthMismatch,
  Infeasible,
  RankDeficient,
  IncompleteReconstruction,
  FitDidNotConverge,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(std::size_t nullity, const std::string& what);
  std::size_t nullity() const noexcept { return nullity_; }

 private:
  std::size_t nullity_;
};

}  // namespace subwit
