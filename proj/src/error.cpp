#include "heval/error.hpp"

namespace heval {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AllNotApplicable: return "AllNotApplicable";
    case ErrorCode::LineCountMismatch: return "LineCountMismatch";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptySentence: return "EmptySentence";
    case ErrorCode::DuplicateEngine: return "DuplicateEngine";
    case ErrorCode::DuplicateJudge: return "DuplicateJudge";
    case ErrorCode::UnknownJudge: return "UnknownJudge";
    case ErrorCode::UnknownSentence: return "UnknownSentence";
    case ErrorCode::UnknownEngine: return "UnknownEngine";
    case ErrorCode::UnknownConstruct: return "UnknownConstruct";
    case ErrorCode::OutOfScale: return "OutOfScale";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::Io: return "Io";
    case ErrorCode::SentenceSetMismatch: return "SentenceSetMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateR: return "DegenerateR";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message)
    : std::runtime_error(std::move(message)), code_(code) {}

bool is_validation_error(ErrorCode code) { return code != ErrorCode::Io; }

}  // namespace heval
