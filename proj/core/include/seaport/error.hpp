#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seaport {

enum class ErrorCode {
  // model validation
  EmptyTopology,
  NonPositiveRate,
  DuplicateLabel,
  InvalidTraffic,
  InvalidDegree,
  IndexOutOfRange,
  // analytic pipeline
  UnstableSystem,
  UnstablePort,
  NumericOverflow,
  // simulation
  InvalidSimConfig,
  HorizonTooShort,
  NonDrainedTrace,
  // configuration and reports
  SyntaxError,
  SchemaError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library.
///
/// `path()` locates the offending element in configuration-document notation
/// (e.g. `subsystems[0].ports[0].berth_rates[1]`) when one applies. A
/// ValidationError raised while parsing a document keeps the model-level code
/// that triggered it in `cause()`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string path = {},
        std::optional<ErrorCode> cause = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }
  std::optional<ErrorCode> cause() const noexcept { return cause_; }

 private:
  ErrorCode code_;
  std::string path_;
  std::optional<ErrorCode> cause_;
};

}  // namespace seaport
