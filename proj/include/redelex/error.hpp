#pragma once

#include <stdexcept>
#include <string>

namespace redelex {

// Error codes surfaced through the CLI as machine-readable identifiers.
enum class ErrorCode {
    MissingTableFile,
    DescriptorParseError,
    ArityMismatch,
    FileNotDatabase,
    UnsupportedDeclaredType,
    EmptySample,
    DanglingReference,
    MissingTimeColumn,
    TargetIsKey,
    AllTargetsNull,
    NothingMaskable,
    BadRatios,
    MissingTimestamps,
    UnknownSeed,
    EmptyTrainSplit,
    ShapeMismatch,
    LabelOutOfRange,
    SingleClass,
    BadClassIndex,
    TargetMissing,
    BadSpec,
    ConfigError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace redelex
