#include "heval/reference_fixtures.hpp"

#include "heval/error.hpp"
#include "heval/rational.hpp"

namespace heval::reference {

namespace {

constexpr std::optional<int> NA = std::nullopt;

bool within(const Rational& a, const Rational& b, const Rational& tol) {
  const Rational diff = a > b ? a - b : b - a;
  return diff <= tol;
}

}  // namespace

const std::vector<EngineInfo>& engines() {
  static const std::vector<EngineInfo> kEngines{
      {"E1", "Microsoft Translator"},
      {"E2", "Google Translator"},
      {"E3", "Moses Syntax Based MT"},
      {"E4", "Moses Phrase Based MT"},
      {"E5", "Example Based MT"},
  };
  return kEngines;
}

std::string_view source_sentence() {
  return "Most impressive are the black and white chessboard marble floor, the four tall minarets (40 m high) at the corners of the structure, and the majestic dome in the middle.";
}

std::string_view engine_output(std::string_view engine_id) {
  if (engine_id == "E1") {
    return "सबसे प्रभावशाली हैं काले और सफेद बिसात संगमरमर फर्श, चार लंबा मीनारों (40 मीटर ऊँची) संरचना है, और बीच में राजसी गुंबद के कोने में।";
  }
  if (engine_id == "E2") {
    return "सबसे प्रभावशाली बिसात काले और सफेद संगमरमर का फर्श, संरचना के कोनों पर चार लंबा मीनारों (40 मीटर ऊँची), और बीच में राजसी गुंबद हैं.";
  }
  if (engine_id == "E3") {
    return "ज्यादातर impressive हैं , काला और सफेद chessboard छतें मंजिल , के चार लंबे मीनारों (40 केंद्रीय high) पर के जनपथ के के structure , और के प्रकाशित गुम्बद के मध्य में है ।";
  }
  if (engine_id == "E4") {
    return "Most के के काला और सफेद संगमरमर chessboard floor , impressive हैं चार लंबे minarets के corners पर (40 मी . ऊँचा) संरचना , मैजेस्टिक गुम्बद मध्य में और ।";
  }
  if (engine_id == "E5") {
    return "सबसे हैं के काले और सफेद संगमरमर मंजिल , चार ऊँची मीनारों (मी . ऊँचे) के कोने-कोने की संरचना , और के मैजेस्टिक गुम्बद के मध्य में 40 के पर है ।";
  }
  throw Error(ErrorCode::UnknownEngine, "no bundled output for " + std::string(engine_id));
}

const std::vector<ScoredAnnotation>& sentence_annotations() {
  static const std::vector<ScoredAnnotation> kRows{
      {"E1", 1, {3, 4, 4, NA, 3, 2, 3, 4, 3, 3, 3}, "0.80"},
      {"E1", 2, {2, 4, 4, NA, 3, 3, 3, 4, 2, 2, 2}, "0.73"},
      {"E2", 1, {4, 4, 4, NA, 4, 3, 4, 4, 4, 3, 3}, "0.93"},
      {"E2", 2, {4, 4, 4, NA, 4, 4, 4, 4, 4, 3, 3}, "0.95"},
      {"E3", 1, {2, 2, 2, NA, 2, 1, 1, 1, 1, 1, 1}, "0.35"},
      {"E3", 2, {2, 2, 2, NA, 1, 1, 1, 1, 1, 0, 1}, "0.30"},
      {"E4", 1, {2, 1, 1, NA, 1, 0, 1, 3, 1, 1, 1}, "0.30"},
      {"E4", 2, {2, 0, 0, NA, 1, 0, 1, 3, 1, 0, 1}, "0.23"},
      {"E5", 1, {2, 2, 2, NA, 2, 1, 1, 2, 1, 1, 2}, "0.4"},
      {"E5", 2, {2, 2, 2, NA, 2, 1, 1, 2, 1, 1, 2}, "0.4"},
  };
  return kRows;
}

const std::vector<ExternalLevels>& sentence_external_levels() {
  static const std::vector<ExternalLevels> kLevels{
      {"E1", 3, 3}, {"E2", 4, 4}, {"E3", 2, 2}, {"E4", 2, 2}, {"E5", 2, 3},
  };
  return kLevels;
}

const std::vector<AgreementCount>& agreement_counts() {
  static const std::vector<AgreementCount> kCounts{
      {"highest rank, all engines", 842, 1300, "64.77"},
      {"highest rank, E3/E4/E5", 804, 1300, "61.85"},
      {"engine rank, E1", 849, 1300, "65.30"},
      {"engine rank, E2", 885, 1300, "68.07"},
      {"engine rank, E3", 959, 1300, "73.77"},
      {"engine rank, E4", 967, 1300, "74.38"},
      {"engine rank, E5", 1067, 1300, "82.07"},
  };
  return kCounts;
}

bool Verification::passed() const {
  for (const auto& c : score_checks) {
    if (!c.passed) return false;
  }
  for (const auto& c : percentage_checks) {
    if (!c.passed) return false;
  }
  return true;
}

Verification verify() {
  Verification out;
  for (const auto& row : sentence_annotations()) {
    const auto score = rubric::final_score(rubric::validate_vector(row.scores)).value();
    const Rational printed = parse_decimal(std::string(row.printed_overall));
    out.score_checks.push_back({std::string(row.engine) + " judge " + std::to_string(row.judge),
                                std::string(row.printed_overall), format_fixed(score, 4),
                                within(score, printed, Rational(5, 1000))});
  }
  for (const auto& row : agreement_counts()) {
    const Rational pct(100 * row.count, row.total);
    const Rational printed = parse_decimal(std::string(row.printed_percentage));
    out.percentage_checks.push_back({std::string(row.label), std::string(row.printed_percentage),
                                     format_fixed(pct, 2), within(pct, printed, Rational(1, 100))});
  }
  return out;
}

}  // namespace heval::reference
