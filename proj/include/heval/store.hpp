#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heval/campaign.hpp"
#include "heval/interchange.hpp"

namespace heval {

using ExternalSubmission = interchange::ImportedExternal;

struct AnnotationSubmission {
  std::string judge_id;
  std::size_t sentence = 0;
  std::string engine_id;
  rubric::AnnotationVector vector;
};

/// Durable campaign directory:
///
///   campaign.json      configuration and engine registry
///   source.txt         source sentences, one per line
///   constructs.txt     optional construct tags, one per line
///   outputs/<id>.txt   one file per engine
///   judges.jsonl       registered judges, append-only
///   journal.jsonl      annotation records, append-only, all revisions
///   external.jsonl     adequacy/fluency records, append-only
///
/// Single writer, many readers: mutations are serialized and become
/// visible only after the journal line is flushed to disk; readers take
/// immutable snapshots.
class CampaignStore {
 public:
  struct CreateOptions {
    CampaignConfig config;
    std::size_t document_size = 100;
    std::vector<std::optional<corpus::Construct>> constructs;
  };

  /// Creates `dir` (must not already hold a campaign) and writes the corpus.
  static CampaignStore create(const std::filesystem::path& dir, std::string_view source_text,
                              std::span<const corpus::EngineOutput> outputs,
                              const CreateOptions& options);
  /// Loads a campaign directory and replays its journals. A torn final
  /// journal line (no trailing newline) is ignored; any other malformed
  /// line is a SchemaViolation.
  static CampaignStore open(const std::filesystem::path& dir);
  static bool exists(const std::filesystem::path& dir);

  CampaignStore(CampaignStore&&) noexcept;
  CampaignStore& operator=(CampaignStore&&) noexcept;
  ~CampaignStore();

  const std::filesystem::path& dir() const;

  /// Consistent, immutable view of the current state.
  std::shared_ptr<const Campaign> snapshot() const;

  Judge add_judge(Judge judge);
  /// Creates a judge with the next free id "J<n>".
  Judge add_judge_named(std::string display_name);

  AnnotationRecord record_annotation(std::string_view judge_id, std::size_t sentence,
                                     std::string_view engine_id,
                                     const rubric::AnnotationVector& vector);
  /// Same as record_annotation, but rejects the write when the key's
  /// current revision differs from `expected_revision`. Returns nullopt on
  /// conflict.
  std::optional<AnnotationRecord> record_annotation_if(std::string_view judge_id,
                                                      std::size_t sentence,
                                                      std::string_view engine_id,
                                                      const rubric::AnnotationVector& vector,
                                                      std::int64_t expected_revision);
  /// Validates the whole batch first; one flush for all records.
  std::vector<AnnotationRecord> record_annotations(std::span<const AnnotationSubmission> batch);

  ExternalScoreRecord record_external_score(std::size_t sentence, std::string_view engine_id,
                                            Measure measure, int level);
  std::vector<ExternalScoreRecord> record_external_scores(
      std::span<const ExternalSubmission> batch);

  /// All-or-nothing import of an annotation CSV.
  std::size_t import_annotations_csv(std::string_view text);
  /// All-or-nothing import of an external scores CSV.
  std::size_t import_external_csv(std::string_view text, std::optional<Measure> measure);

 private:
  struct State;
  explicit CampaignStore(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

/// Every annotation line of a journal file, in order.
std::vector<AnnotationRecord> read_journal(const std::filesystem::path& journal_file);

std::string read_file(const std::filesystem::path& path);

}  // namespace heval
