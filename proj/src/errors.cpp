#include "subwit/errors.hpp"

namespace subwit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonHermitianObservable: return "NonHermitianObservable";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidExcitation: return "InvalidExcitation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IncompleteReconstruction: return "IncompleteReconstruction";
    case ErrorCode::FitDidNotConverge: return "FitDidNotConverge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

RankDeficientError::RankDeficientError(std::size_t nullity, const std::string& what)
    : Error(ErrorCode::RankDeficient, what + " (null-space dimension " + std::to_string(nullity) + ")"),
      nullity_(nullity) {}

}  // namespace subwit
