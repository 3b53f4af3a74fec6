#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heval/corpus.hpp"
#include "heval/rubric.hpp"

namespace heval {

struct Judge {
  std::string id;
  std::string display_name;
};

enum class Measure { Adequacy, Fluency };

std::string_view measure_name(Measure m);  // "adequacy" / "fluency"
/// Case-insensitive. Throws InvalidArgument.
Measure parse_measure(std::string_view text);

struct ScaleBounds {
  int min = 1;
  int max = 5;
};

struct CampaignConfig {
  std::string id = "campaign";
  std::uint64_t rng_seed = 0;
  ScaleBounds external_scale;
};

struct AnnotationKey {
  std::string judge_id;
  std::size_t sentence = 0;
  std::string engine_id;

  auto operator<=>(const AnnotationKey&) const = default;
};

struct AnnotationRecord {
  std::string judge_id;
  std::size_t sentence_index = 0;
  std::string engine_id;
  rubric::AnnotationVector vector;
  std::int64_t revision = 0;
  std::string timestamp;

  AnnotationKey key() const { return {judge_id, sentence_index, engine_id}; }
};

struct ExternalKey {
  std::size_t sentence = 0;
  std::string engine_id;
  Measure measure = Measure::Adequacy;

  auto operator<=>(const ExternalKey&) const = default;
};

struct ExternalScoreRecord {
  std::size_t sentence_index = 0;
  std::string engine_id;
  Measure measure = Measure::Adequacy;
  int level = 0;
  std::int64_t revision = 0;
  std::string timestamp;

  ExternalKey key() const { return {sentence_index, engine_id, measure}; }
};

/// UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

/// In-memory campaign state. A plain value: copying yields an independent
/// snapshot. Persistence and locking live in CampaignStore.
///
/// Mutations come in prepare/apply pairs so a caller can journal the
/// prepared record before it becomes visible.
class Campaign {
 public:
  Campaign(CampaignConfig config, std::shared_ptr<const corpus::Corpus> corpus);

  const CampaignConfig& config() const noexcept { return config_; }
  const corpus::Corpus& corpus() const noexcept { return *corpus_; }
  std::shared_ptr<const corpus::Corpus> corpus_ptr() const noexcept { return corpus_; }
  const std::vector<Judge>& judges() const noexcept { return judges_; }
  const std::map<AnnotationKey, AnnotationRecord>& annotations() const noexcept {
    return annotations_;
  }
  const std::map<ExternalKey, ExternalScoreRecord>& external_scores() const noexcept {
    return external_;
  }

  bool has_judge(std::string_view id) const;
  const Judge& judge(std::string_view id) const;  // UnknownJudge
  std::size_t engine_index(std::string_view id) const;  // UnknownEngine
  void require_sentence(std::size_t sentence) const;  // UnknownSentence

  /// Throws DuplicateJudge or InvalidArgument for a malformed id.
  const Judge& add_judge(Judge judge);

  const AnnotationRecord* find_annotation(const AnnotationKey& key) const;
  std::int64_t current_revision(const AnnotationKey& key) const;

  /// Validates keys and returns the next revision of the record without
  /// applying it.
  AnnotationRecord prepare_annotation(std::string_view judge_id, std::size_t sentence,
                                      std::string_view engine_id,
                                      const rubric::AnnotationVector& vector,
                                      std::string timestamp = utc_timestamp()) const;
  /// Installs a record; its revision must be exactly current + 1.
  void apply(const AnnotationRecord& record);

  const AnnotationRecord& record_annotation(std::string_view judge_id, std::size_t sentence,
                                            std::string_view engine_id,
                                            const rubric::AnnotationVector& vector,
                                            std::string timestamp = utc_timestamp());

  /// Errors: UnknownSentence/Engine, OutOfScale(level).
  ExternalScoreRecord prepare_external_score(std::size_t sentence, std::string_view engine_id,
                                             Measure measure, int level,
                                             std::string timestamp = utc_timestamp()) const;
  void apply(const ExternalScoreRecord& record);
  const ExternalScoreRecord& record_external_score(std::size_t sentence,
                                                   std::string_view engine_id, Measure measure,
                                                   int level,
                                                   std::string timestamp = utc_timestamp());
  std::optional<int> external_level(std::size_t sentence, std::string_view engine_id,
                                    Measure measure) const;

 private:
  CampaignConfig config_;
  std::shared_ptr<const corpus::Corpus> corpus_;
  std::vector<Judge> judges_;
  std::map<AnnotationKey, AnnotationRecord> annotations_;
  std::map<ExternalKey, ExternalScoreRecord> external_;
};

}  // namespace heval
