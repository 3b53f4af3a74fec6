#include "heval/interchange.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <tuple>

#include <json.hpp>

#include "heval/error.hpp"

namespace heval::interchange {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kAnnotationHeader =
    "judge,sentence,engine,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,final_score";

Error schema(std::string reason, std::optional<std::size_t> line = std::nullopt) {
  std::string msg = line ? "line " + std::to_string(*line) + ": " + reason : reason;
  Error e(ErrorCode::SchemaViolation, std::move(msg));
  e.line = line;
  return e;
}

std::int64_t parse_int(std::string_view field, std::string_view what) {
  std::int64_t v = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw schema("invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return v;
}

ojson parse_object(std::string_view line) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw schema(std::string("malformed JSON: ") + ex.what());
  }
  if (!j.is_object()) throw schema("record is not a JSON object");
  return j;
}

template <typename T>
T field(const ojson& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw schema(std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw schema(std::string("field '") + name + "' has the wrong type");
  }
}

rubric::AnnotationVector vector_from_json(const ojson& scores) {
  if (!scores.is_array()) throw schema("'scores' must be an array");
  std::vector<std::optional<int>> raw;
  for (const auto& s : scores) {
    if (s.is_null()) {
      raw.emplace_back();
    } else if (s.is_number_integer()) {
      raw.emplace_back(s.get<int>());
    } else {
      throw schema("scores must be integers or null");
    }
  }
  try {
    return rubric::validate_vector(raw);
  } catch (const Error& e) {
    throw schema(e.what());
  }
}

// Line-by-line CSV reader over a whole document.
std::vector<std::string_view> csv_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string encode_journal_line(const AnnotationRecord& r) {
  ojson scores = ojson::array();
  for (const auto& s : r.vector.scores()) {
    if (s.is_applicable()) {
      scores.push_back(s.level());
    } else {
      scores.push_back(nullptr);
    }
  }
  ojson j;
  j["judge"] = r.judge_id;
  j["sentence"] = r.sentence_index;
  j["engine"] = r.engine_id;
  j["scores"] = std::move(scores);
  j["revision"] = r.revision;
  j["timestamp"] = r.timestamp;
  return j.dump();
}

AnnotationRecord decode_journal_line(std::string_view line) {
  const ojson j = parse_object(line);
  auto scores_it = j.find("scores");
  if (scores_it == j.end()) throw schema("missing field 'scores'");
  return AnnotationRecord{field<std::string>(j, "judge"), field<std::size_t>(j, "sentence"),
                          field<std::string>(j, "engine"), vector_from_json(*scores_it),
                          field<std::int64_t>(j, "revision"),
                          field<std::string>(j, "timestamp")};
}

std::string encode_external_line(const ExternalScoreRecord& r) {
  ojson j;
  j["sentence"] = r.sentence_index;
  j["engine"] = r.engine_id;
  j["measure"] = measure_name(r.measure);
  j["level"] = r.level;
  j["revision"] = r.revision;
  j["timestamp"] = r.timestamp;
  return j.dump();
}

ExternalScoreRecord decode_external_line(std::string_view line) {
  const ojson j = parse_object(line);
  Measure m;
  try {
    m = parse_measure(field<std::string>(j, "measure"));
  } catch (const Error& e) {
    throw schema(e.what());
  }
  return ExternalScoreRecord{field<std::size_t>(j, "sentence"), field<std::string>(j, "engine"),
                             m,
                             field<int>(j, "level"),
                             field<std::int64_t>(j, "revision"),
                             field<std::string>(j, "timestamp")};
}

std::string encode_judge_line(const Judge& judge) {
  ojson j;
  j["id"] = judge.id;
  j["name"] = judge.display_name;
  return j.dump();
}

Judge decode_judge_line(std::string_view line) {
  const ojson j = parse_object(line);
  return Judge{field<std::string>(j, "id"), field<std::string>(j, "name")};
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string export_annotations_csv(const Campaign& campaign) {
  std::map<std::string_view, std::size_t> judge_order;
  for (std::size_t i = 0; i < campaign.judges().size(); ++i) {
    judge_order[campaign.judges()[i].id] = i;
  }
  std::vector<const AnnotationRecord*> rows;
  rows.reserve(campaign.annotations().size());
  for (const auto& [key, rec] : campaign.annotations()) rows.push_back(&rec);
  std::sort(rows.begin(), rows.end(), [&](const AnnotationRecord* a, const AnnotationRecord* b) {
    const auto ka = std::make_tuple(judge_order.at(a->judge_id), a->sentence_index,
                                    campaign.engine_index(a->engine_id));
    const auto kb = std::make_tuple(judge_order.at(b->judge_id), b->sentence_index,
                                    campaign.engine_index(b->engine_id));
    return ka < kb;
  });

  std::string out(kAnnotationHeader);
  out += '\n';
  for (const auto* rec : rows) {
    out += csv_field(rec->judge_id);
    out += ',';
    out += std::to_string(rec->sentence_index);
    out += ',';
    out += csv_field(rec->engine_id);
    for (const auto& s : rec->vector.scores()) {
      out += ',';
      if (s.is_applicable()) out += std::to_string(s.level());
    }
    out += ',';
    out += format_fixed(rubric::final_score(rec->vector).value(), 4);
    out += '\n';
  }
  return out;
}

std::vector<ImportedAnnotation> parse_annotations_csv(const Campaign& campaign,
                                                      std::string_view text) {
  const auto lines = csv_lines(text);
  if (lines.empty() || lines.front() != kAnnotationHeader) {
    throw schema("expected header '" + std::string(kAnnotationHeader) + "'", 1);
  }
  std::vector<ImportedAnnotation> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (lines[n].empty()) continue;
    const auto fields = split_csv_record(lines[n]);
    if (fields.size() != 15) {
      throw schema("expected 15 columns, got " + std::to_string(fields.size()), line_no);
    }
    try {
      const std::string& judge_id = fields[0];
      const std::string& engine_id = fields[2];
      if (!corpus::is_valid_identifier(judge_id)) {
        throw schema("invalid judge id '" + judge_id + "'");
      }
      const auto sentence = parse_int(fields[1], "sentence");
      if (sentence < 0 || static_cast<std::size_t>(sentence) >= campaign.corpus().sentences.size()) {
        throw schema("sentence " + fields[1] + " not in corpus");
      }
      if (!campaign.corpus().engine_index(engine_id)) {
        throw schema("unknown engine '" + engine_id + "'");
      }
      std::vector<std::optional<int>> raw;
      for (std::size_t f = 3; f < 14; ++f) {
        if (fields[f].empty()) {
          raw.emplace_back();
        } else {
          raw.emplace_back(static_cast<int>(parse_int(fields[f], "feature score")));
        }
      }
      ImportedAnnotation row{judge_id, static_cast<std::size_t>(sentence), engine_id,
                             rubric::validate_vector(raw)};
      const auto expected = format_fixed(rubric::final_score(row.vector).value(), 4);
      if (fields[14] != expected) {
        throw schema("final_score " + fields[14] + " does not match scores (" + expected + ")");
      }
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaViolation && e.line) throw;
      Error wrapped = schema(e.what(), line_no);
      wrapped.ordinal = e.ordinal;
      wrapped.value = e.value;
      throw wrapped;
    }
  }
  return rows;
}

void import_annotations_csv(Campaign& campaign, std::string_view text) {
  const auto rows = parse_annotations_csv(campaign, text);
  Campaign staged = campaign;
  for (const auto& row : rows) {
    if (!staged.has_judge(row.judge_id)) staged.add_judge(Judge{row.judge_id, row.judge_id});
    staged.record_annotation(row.judge_id, row.sentence, row.engine_id, row.vector);
  }
  campaign = std::move(staged);
}

std::string export_external_csv(const Campaign& campaign) {
  std::vector<const ExternalScoreRecord*> rows;
  for (const auto& [key, rec] : campaign.external_scores()) rows.push_back(&rec);
  std::sort(rows.begin(), rows.end(),
            [&](const ExternalScoreRecord* a, const ExternalScoreRecord* b) {
              return std::make_tuple(a->sentence_index, campaign.engine_index(a->engine_id),
                                     a->measure) <
                     std::make_tuple(b->sentence_index, campaign.engine_index(b->engine_id),
                                     b->measure);
            });
  std::string out = "sentence,engine,measure,level\n";
  for (const auto* rec : rows) {
    out += std::to_string(rec->sentence_index) + ',' + csv_field(rec->engine_id) + ',' +
           std::string(measure_name(rec->measure)) + ',' + std::to_string(rec->level) + '\n';
  }
  return out;
}

std::vector<ImportedExternal> parse_external_csv(const Campaign& campaign,
                                                 std::string_view text,
                                                 std::optional<Measure> measure) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw schema("empty file", 1);
  bool has_measure = false;
  if (lines.front() == "sentence,engine,measure,level") {
    has_measure = true;
  } else if (lines.front() != "sentence,engine,level") {
    throw schema("expected header 'sentence,engine,measure,level'", 1);
  }
  if (!has_measure && !measure) throw schema("no measure column and no measure given", 1);

  std::vector<ImportedExternal> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (lines[n].empty()) continue;
    const auto fields = split_csv_record(lines[n]);
    const std::size_t expected_cols = has_measure ? 4 : 3;
    try {
      if (fields.size() != expected_cols) {
        throw schema("expected " + std::to_string(expected_cols) + " columns, got " +
                     std::to_string(fields.size()));
      }
      ImportedExternal row;
      const auto sentence = parse_int(fields[0], "sentence");
      if (sentence < 0) throw schema("negative sentence index");
      row.sentence = static_cast<std::size_t>(sentence);
      row.engine_id = fields[1];
      if (has_measure) {
        row.measure = parse_measure(fields[2]);
        if (measure && row.measure != *measure) {
          throw schema("row measure " + fields[2] + " differs from requested " +
                       std::string(measure_name(*measure)));
        }
      } else {
        row.measure = *measure;
      }
      row.level = static_cast<int>(parse_int(fields[expected_cols - 1], "level"));
      // Key and scale checks without mutating the campaign.
      campaign.prepare_external_score(row.sentence, row.engine_id, row.measure, row.level, "");
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaViolation && e.line) throw;
      Error wrapped = schema(e.what(), line_no);
      wrapped.value = e.value;
      throw wrapped;
    }
  }
  return rows;
}

}  // namespace heval::interchange
