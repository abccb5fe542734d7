#include "seaport/error.hpp"

#include <utility>

namespace seaport {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTopology: return "EmptyTopology";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::InvalidTraffic: return "InvalidTraffic";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnstableSystem: return "UnstableSystem";
    case ErrorCode::UnstablePort: return "UnstablePort";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::InvalidSimConfig: return "InvalidSimConfig";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::NonDrainedTrace: return "NonDrainedTrace";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::string& path) {
  std::string out{to_string(code)};
  if (!path.empty()) {
    out += " at ";
    out += path;
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string path,
             std::optional<ErrorCode> cause)
    : std::runtime_error(compose(code, message, path)),
      code_(code),
      path_(std::move(path)),
      cause_(cause) {}

}  // namespace seaport
