#pragma once

#include <stdexcept>
#include <string>

namespace filtlab {

// Error taxonomy shared by the library and mapped to CLI exit codes.
enum class ErrorCode {
  // input / validation (CLI exit 2)
  NonStochasticRow,
  ShapeMismatch,
  EmptyLevel,
  NotNormalized,
  DimensionMismatch,
  BadSchedule,
  HorizonExceeded,
  ZeroMassState,
  LevelMissing,
  LevelTooSmall,
  WindowTooLarge,
  EmptySample,
  TooLarge,
  HeightMismatch,
  ParseError,
  BadFlag,
  // numeric failures (CLI exit 3)
  SolverStall,
  NonFinite,
  // oracle disagreement (CLI exit 4)
  OracleMismatch,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonStochasticRow: return "NonStochasticRow";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyLevel: return "EmptyLevel";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadSchedule: return "BadSchedule";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::ZeroMassState: return "ZeroMassState";
    case ErrorCode::LevelMissing: return "LevelMissing";
    case ErrorCode::LevelTooSmall: return "LevelTooSmall";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::HeightMismatch: return "HeightMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::SolverStall: return "SolverStall";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

  // Exit code the CLI maps this error to: 2 input, 3 numeric, 4 oracle.
  int exit_code() const {
    switch (code_) {
      case ErrorCode::SolverStall:
      case ErrorCode::NonFinite:
        return 3;
      case ErrorCode::OracleMismatch:
        return 4;
      default:
        return 2;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace filtlab
