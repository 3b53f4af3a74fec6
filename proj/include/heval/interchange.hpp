#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heval/campaign.hpp"

// File formats shared by the store, the CLI and the service:
//   annotation journal   JSON lines, one AnnotationRecord each
//   annotation CSV       judge,sentence,engine,f1..f11,final_score
//   external scores CSV  sentence,engine,measure,level
namespace heval::interchange {

std::string encode_journal_line(const AnnotationRecord& record);
/// Throws SchemaViolation (line left for the caller to fill in).
AnnotationRecord decode_journal_line(std::string_view line);

std::string encode_external_line(const ExternalScoreRecord& record);
ExternalScoreRecord decode_external_line(std::string_view line);

std::string encode_judge_line(const Judge& judge);
Judge decode_judge_line(std::string_view line);

/// Current annotations ordered by judge registration, sentence, then
/// engine registry order. NA is an empty field; final_score has 4 decimals.
std::string export_annotations_csv(const Campaign& campaign);

struct ImportedAnnotation {
  std::string judge_id;
  std::size_t sentence = 0;
  std::string engine_id;
  rubric::AnnotationVector vector;
};

/// Parses and validates a whole annotation CSV against the campaign's
/// corpus. Unknown judges are allowed (they get created on import).
/// Throws SchemaViolation(line, reason) on the first problem; nothing is
/// returned partially.
std::vector<ImportedAnnotation> parse_annotations_csv(const Campaign& campaign,
                                                      std::string_view text);

/// Applies parsed rows, creating missing judges. All-or-nothing: works on
/// a copy and only commits on success.
void import_annotations_csv(Campaign& campaign, std::string_view text);

std::string export_external_csv(const Campaign& campaign);

struct ImportedExternal {
  std::size_t sentence = 0;
  std::string engine_id;
  Measure measure = Measure::Adequacy;
  int level = 0;
};

/// Accepts `sentence,engine,measure,level` or `sentence,engine,level`.
/// When `measure` is given, rows must agree with it; when the file has no
/// measure column, `measure` is required.
std::vector<ImportedExternal> parse_external_csv(const Campaign& campaign,
                                                 std::string_view text,
                                                 std::optional<Measure> measure);

/// Splits one CSV record. Fields may be double-quoted with "" escapes.
std::vector<std::string> split_csv_record(std::string_view line);
/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view value);

}  // namespace heval::interchange
