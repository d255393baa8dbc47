#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tclab {

enum class ErrorCode {
  NonRefiningFiltration,
  NontrivialRoot,
  BadProbabilities,
  BadPartition,
  TimeOutOfRange,
  NotMeasurable,
  SpaceMismatch,
  EmptyFamily,
  BadAlpha,
  BadX,
  NotOneStep,
  TimeOrder,
  NonInvertibleTransform,
  EmptyBenchmark,
  KindMismatch,
  EquivalenceBroken,
  NotProjective,
  NotDecreasingFamily,
  NotTranslationInvariant,
  BracketExhausted,
  HypothesisFailed,
  SchemaError,
  AdaptednessError,
  UnknownIdentifier,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported through this type; the message names the
/// offending object and location.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tclab
