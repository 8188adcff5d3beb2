#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bitext {

enum class ErrorCode {
  kLineCountMismatch,
  kInvalidEncoding,
  kMalformedRecord,
  kInvalidOrigin,
  kEmptyCorpus,
  kMalformedHeader,
  kDimensionMismatch,
  kInvalidNumber,
  kZeroVector,
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedFile,
  kTrailingData,
  kUnsortedIds,
  kMissingEmbeddings,
  kLengthMismatch,
  kConstantSeries,
  kInvalidArgument,
  kIoError,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLineCountMismatch: return "LINE_COUNT_MISMATCH";
    case ErrorCode::kInvalidEncoding: return "INVALID_ENCODING";
    case ErrorCode::kMalformedRecord: return "MALFORMED_RECORD";
    case ErrorCode::kInvalidOrigin: return "INVALID_ORIGIN";
    case ErrorCode::kEmptyCorpus: return "EMPTY_CORPUS";
    case ErrorCode::kMalformedHeader: return "MALFORMED_HEADER";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kInvalidNumber: return "INVALID_NUMBER";
    case ErrorCode::kZeroVector: return "ZERO_VECTOR";
    case ErrorCode::kBadMagic: return "BAD_MAGIC";
    case ErrorCode::kUnsupportedVersion: return "UNSUPPORTED_VERSION";
    case ErrorCode::kTruncatedFile: return "TRUNCATED_FILE";
    case ErrorCode::kTrailingData: return "TRAILING_DATA";
    case ErrorCode::kUnsortedIds: return "UNSORTED_IDS";
    case ErrorCode::kMissingEmbeddings: return "MISSING_EMBEDDINGS";
    case ErrorCode::kLengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::kConstantSeries: return "CONSTANT_SERIES";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kIoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

/// Every failure the library reports. what() is "CODE: message", one line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bitext
