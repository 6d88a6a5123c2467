#pragma once

#include <stdexcept>
#include <string>

namespace aod {

// Every failure the library can signal, as a closed set so callers (and the
// CLI exit-code mapping) can switch on the cause rather than parse messages.
enum class ErrorCode {
  EmptyBag,                // aggregate requested over zero values
  DuplicateId,             // relation construction saw the same tuple id twice
  InfeasibleValue,         // no sub-bag of the group attains the requested value
  NonPositiveValue,        // optimized sum packing needs strictly positive values
  UnsupportedCombination,  // requested option combination cannot run
  BoundTooTight,           // removal bound below every feasible repair
  CorruptBacktrace,        // solution-dictionary chain failed re-derivation checks
  TooLarge,                // brute-force oracle asked to enumerate beyond its cap
  InvalidParams,           // generator/bench parameters out of range
  MissingColumn,           // CSV header lacks a configured column
  ParseError,              // malformed CSV cell / number / config value
  NonIntegralValue,        // non-integral input where no binning/scaling applies
  OverflowDetected,        // exact arithmetic or a table size left the 64-bit range
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace aod
