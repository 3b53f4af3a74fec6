#include "heval/campaign.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>

#include "heval/error.hpp"

namespace heval {

namespace {

Error unknown(ErrorCode code, std::string_view what, std::string_view id) {
  Error e(code, "unknown " + std::string(what) + " " + std::string(id));
  e.subject = std::string(id);
  return e;
}

}  // namespace

std::string_view measure_name(Measure m) {
  return m == Measure::Adequacy ? "adequacy" : "fluency";
}

Measure parse_measure(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "adequacy") return Measure::Adequacy;
  if (lower == "fluency") return Measure::Fluency;
  throw Error(ErrorCode::InvalidArgument, "unknown measure: " + std::string(text));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Campaign::Campaign(CampaignConfig config, std::shared_ptr<const corpus::Corpus> corpus)
    : config_(std::move(config)), corpus_(std::move(corpus)) {
  if (!corpus_) throw Error(ErrorCode::InvalidArgument, "campaign needs a corpus");
  if (config_.external_scale.min > config_.external_scale.max) {
    throw Error(ErrorCode::InvalidArgument, "external scale min exceeds max");
  }
}

bool Campaign::has_judge(std::string_view id) const {
  return std::any_of(judges_.begin(), judges_.end(), [&](const Judge& j) { return j.id == id; });
}

const Judge& Campaign::judge(std::string_view id) const {
  for (const auto& j : judges_) {
    if (j.id == id) return j;
  }
  throw unknown(ErrorCode::UnknownJudge, "judge", id);
}

std::size_t Campaign::engine_index(std::string_view id) const {
  if (auto idx = corpus_->engine_index(id)) return *idx;
  throw unknown(ErrorCode::UnknownEngine, "engine", id);
}

void Campaign::require_sentence(std::size_t sentence) const {
  if (sentence >= corpus_->sentences.size()) {
    Error e(ErrorCode::UnknownSentence, "unknown sentence " + std::to_string(sentence));
    e.value = static_cast<std::int64_t>(sentence);
    throw e;
  }
}

const Judge& Campaign::add_judge(Judge judge) {
  if (!corpus::is_valid_identifier(judge.id)) {
    throw Error(ErrorCode::InvalidArgument, "invalid judge id: '" + judge.id + "'");
  }
  if (has_judge(judge.id)) {
    Error e(ErrorCode::DuplicateJudge, "duplicate judge " + judge.id);
    e.subject = judge.id;
    throw e;
  }
  if (judge.display_name.empty()) judge.display_name = judge.id;
  judges_.push_back(std::move(judge));
  return judges_.back();
}

const AnnotationRecord* Campaign::find_annotation(const AnnotationKey& key) const {
  auto it = annotations_.find(key);
  return it == annotations_.end() ? nullptr : &it->second;
}

std::int64_t Campaign::current_revision(const AnnotationKey& key) const {
  const auto* rec = find_annotation(key);
  return rec ? rec->revision : 0;
}

AnnotationRecord Campaign::prepare_annotation(std::string_view judge_id, std::size_t sentence,
                                              std::string_view engine_id,
                                              const rubric::AnnotationVector& vector,
                                              std::string timestamp) const {
  judge(judge_id);
  require_sentence(sentence);
  engine_index(engine_id);
  AnnotationRecord rec{std::string(judge_id), sentence, std::string(engine_id), vector, 0,
                       std::move(timestamp)};
  rec.revision = current_revision(rec.key()) + 1;
  return rec;
}

void Campaign::apply(const AnnotationRecord& record) {
  judge(record.judge_id);
  require_sentence(record.sentence_index);
  engine_index(record.engine_id);
  const auto key = record.key();
  const auto expected = current_revision(key) + 1;
  if (record.revision != expected) {
    Error e(ErrorCode::SchemaViolation,
            "revision " + std::to_string(record.revision) + " does not follow " +
                std::to_string(expected - 1));
    e.value = record.revision;
    throw e;
  }
  annotations_.insert_or_assign(key, record);
}

const AnnotationRecord& Campaign::record_annotation(std::string_view judge_id,
                                                    std::size_t sentence,
                                                    std::string_view engine_id,
                                                    const rubric::AnnotationVector& vector,
                                                    std::string timestamp) {
  auto rec = prepare_annotation(judge_id, sentence, engine_id, vector, std::move(timestamp));
  apply(rec);
  return annotations_.at(rec.key());
}

ExternalScoreRecord Campaign::prepare_external_score(std::size_t sentence,
                                                     std::string_view engine_id,
                                                     Measure measure, int level,
                                                     std::string timestamp) const {
  require_sentence(sentence);
  engine_index(engine_id);
  if (level < config_.external_scale.min || level > config_.external_scale.max) {
    Error e(ErrorCode::OutOfScale, "level " + std::to_string(level) + " outside " +
                                       std::to_string(config_.external_scale.min) + ".." +
                                       std::to_string(config_.external_scale.max));
    e.value = level;
    throw e;
  }
  ExternalScoreRecord rec{sentence, std::string(engine_id), measure, level, 0,
                          std::move(timestamp)};
  auto it = external_.find(rec.key());
  rec.revision = (it == external_.end() ? 0 : it->second.revision) + 1;
  return rec;
}

void Campaign::apply(const ExternalScoreRecord& record) {
  // Re-validate so replayed journals cannot smuggle in bad levels.
  auto checked = prepare_external_score(record.sentence_index, record.engine_id, record.measure,
                                        record.level, record.timestamp);
  checked.revision = record.revision;
  external_.insert_or_assign(checked.key(), std::move(checked));
}

const ExternalScoreRecord& Campaign::record_external_score(std::size_t sentence,
                                                           std::string_view engine_id,
                                                           Measure measure, int level,
                                                           std::string timestamp) {
  auto rec = prepare_external_score(sentence, engine_id, measure, level, std::move(timestamp));
  apply(rec);
  return external_.at(rec.key());
}

std::optional<int> Campaign::external_level(std::size_t sentence, std::string_view engine_id,
                                            Measure measure) const {
  auto it = external_.find(ExternalKey{sentence, std::string(engine_id), measure});
  if (it == external_.end()) return std::nullopt;
  return it->second.level;
}

}  // namespace heval
