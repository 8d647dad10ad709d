#pragma once

#include <stdexcept>
#include <string>

namespace intrank {

// Error taxonomy shared by the whole library.  Kinds map onto CLI exit
// codes: input errors exit 2, internal defects exit 3, negative verdicts
// (NoWitness, not-full-rank) are ordinary return values, not exceptions.
enum class ErrorKind {
  DimensionMismatch,
  NotSquare,
  IndexOutOfRange,
  DivisorContainsZero,
  MixedRadicand,
  RankPreconditionViolated,
  BoxTooTight,
  TooLarge,
  ParseError,
  WitnessInvalid,
  UnsupportedRank,
  UnsatisfiableSpec,
  ConstructionFailed,
  Internal,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DivisorContainsZero: return "DivisorContainsZero";
    case ErrorKind::MixedRadicand: return "MixedRadicand";
    case ErrorKind::RankPreconditionViolated: return "RankPreconditionViolated";
    case ErrorKind::BoxTooTight: return "BoxTooTight";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::WitnessInvalid: return "WitnessInvalid";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::UnsatisfiableSpec: return "UnsatisfiableSpec";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(ErrorKind::ParseError,
              message + " (line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Exact-arithmetic postconditions that the theorems guarantee.  A violation
// is a defect in the construction, never an expected outcome.
inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Internal, "invariant violated: " + what);
}

}  // namespace intrank
