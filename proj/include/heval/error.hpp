#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace heval {

enum class ErrorCode {
  // rubric
  LengthMismatch,
  OutOfRange,
  AllNotApplicable,
  // corpus / store
  LineCountMismatch,
  EmptyCorpus,
  EmptySentence,
  DuplicateEngine,
  DuplicateJudge,
  UnknownJudge,
  UnknownSentence,
  UnknownEngine,
  UnknownConstruct,
  OutOfScale,
  SchemaViolation,
  Io,
  // stats
  SentenceSetMismatch,
  ZeroVariance,
  DegenerateR,
  TooFewSamples,
  NoOverlap,
  // generic argument problems (bad flags, malformed options)
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Structured failure raised by every heval operation.
///
/// `ordinal` and `value` carry the offending feature for rubric errors;
/// `line` the 1-based line for file errors; `subject` names the engine,
/// judge or file involved where relevant.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message);

  ErrorCode code() const noexcept { return code_; }

  std::optional<int> ordinal;
  std::optional<std::int64_t> value;
  std::optional<std::size_t> line;
  std::string subject;

 private:
  ErrorCode code_;
};

/// True for errors caused by bad input data rather than by the environment.
bool is_validation_error(ErrorCode code);

}  // namespace heval
