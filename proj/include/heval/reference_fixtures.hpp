#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heval/rubric.hpp"

// Published worked example (sentence 150 of the English-Hindi test set,
// five engines, two judges) and published agreement counts, bundled as
// verification fixtures.
namespace heval::reference {

struct EngineInfo {
  std::string_view id;
  std::string_view name;
};

const std::vector<EngineInfo>& engines();

inline constexpr std::size_t kSentenceIndex = 150;

std::string_view source_sentence();
/// Output of engine `engine_id` for the bundled sentence.
std::string_view engine_output(std::string_view engine_id);

struct ScoredAnnotation {
  std::string_view engine;
  int judge;  // 1 or 2
  std::array<std::optional<int>, rubric::kFeatureCount> scores;
  std::string_view printed_overall;
};

/// The ten feature vectors with their printed overall scores.
const std::vector<ScoredAnnotation>& sentence_annotations();

struct ExternalLevels {
  std::string_view engine;
  int adequacy;
  int fluency;
};

const std::vector<ExternalLevels>& sentence_external_levels();

struct AgreementCount {
  std::string_view label;
  int count;
  int total;
  std::string_view printed_percentage;
};

/// Highest-rank (combined and limited subset) and per-engine counts.
const std::vector<AgreementCount>& agreement_counts();

struct CheckResult {
  std::string label;
  std::string expected;
  std::string computed;
  bool passed = false;
};

struct Verification {
  std::vector<CheckResult> score_checks;
  std::vector<CheckResult> percentage_checks;
  bool passed() const;
};

/// Recomputes every bundled value. Scores must land within 0.005 of the
/// printed value, percentages within 0.01.
Verification verify();

}  // namespace heval::reference
