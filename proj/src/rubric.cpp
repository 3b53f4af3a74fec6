#include "heval/rubric.hpp"

#include <string>

#include "heval/error.hpp"

namespace heval::rubric {

namespace {

constexpr std::array<Feature, kFeatureCount> kFeatures{{
    {1, "gender_number", "Translation of Gender and Number of the Noun(s)."},
    {2, "tense", "Translation of tense in the sentence."},
    {3, "voice", "Translation of voice in the sentence."},
    {4, "proper_nouns", "Identification of the Proper Noun(s)."},
    {5, "modifiers", "Use of Adjectives and Adverbs corresponding to the Nouns and Verbs."},
    {6, "lexical_choice", "Selection of proper words/synonyms (Lexical Choice)."},
    {7, "phrase_order", "Sequence of phrases and clauses in the translation."},
    {8, "punctuation", "Use of Punctuation Marks in the translation."},
    {9, "fluency", "Fluency of translated text and translator's proficiency."},
    {10, "semantics", "Maintaining the semantics of the source sentence in the translation."},
    {11, "overall",
     "Evaluating the translation of source sentence (With respect to syntax and intended "
     "meaning)."},
}};

Error out_of_range(std::optional<int> ordinal, std::int64_t value) {
  std::string msg = "level " + std::to_string(value) + " outside 0..4";
  if (ordinal) msg = "feature " + std::to_string(*ordinal) + ": " + msg;
  Error e(ErrorCode::OutOfRange, msg);
  e.ordinal = ordinal;
  e.value = value;
  return e;
}

}  // namespace

const std::array<Feature, kFeatureCount>& features() { return kFeatures; }

const Feature& feature(int ordinal) {
  if (ordinal < 1 || ordinal > static_cast<int>(kFeatureCount)) {
    throw Error(ErrorCode::InvalidArgument, "no feature " + std::to_string(ordinal));
  }
  return kFeatures[static_cast<std::size_t>(ordinal - 1)];
}

FeatureScore FeatureScore::applicable(int level) {
  if (level < kMinLevel || level > kMaxLevel) throw out_of_range(std::nullopt, level);
  return FeatureScore(level);
}

AnnotationVector::AnnotationVector(const Scores& scores) : scores_(scores) {
  bool any = false;
  for (const auto& s : scores_) any = any || s.is_applicable();
  if (!any) throw Error(ErrorCode::AllNotApplicable, "every feature is marked not applicable");
}

const FeatureScore& AnnotationVector::at(int ordinal) const {
  if (ordinal < 1 || ordinal > static_cast<int>(kFeatureCount)) {
    throw Error(ErrorCode::InvalidArgument, "no feature " + std::to_string(ordinal));
  }
  return scores_[static_cast<std::size_t>(ordinal - 1)];
}

AnnotationVector validate_vector(std::span<const std::optional<int>> raw) {
  if (raw.size() != kFeatureCount) {
    Error e(ErrorCode::LengthMismatch, "expected 11 feature scores, got " +
                                           std::to_string(raw.size()));
    e.value = static_cast<std::int64_t>(raw.size());
    throw e;
  }
  AnnotationVector::Scores scores{
      FeatureScore::not_applicable(), FeatureScore::not_applicable(),
      FeatureScore::not_applicable(), FeatureScore::not_applicable(),
      FeatureScore::not_applicable(), FeatureScore::not_applicable(),
      FeatureScore::not_applicable(), FeatureScore::not_applicable(),
      FeatureScore::not_applicable(), FeatureScore::not_applicable(),
      FeatureScore::not_applicable()};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!raw[i]) continue;
    const int level = *raw[i];
    if (level < kMinLevel || level > kMaxLevel) {
      throw out_of_range(static_cast<int>(i + 1), level);
    }
    scores[i] = FeatureScore::applicable(level);
  }
  return AnnotationVector(scores);
}

SentenceScore final_score(const AnnotationVector& v) {
  SentenceScore out{0, 0};
  for (const auto& s : v.scores()) {
    if (!s.is_applicable()) continue;
    out.numerator += s.level();
    ++out.applicable_count;
  }
  return out;
}

std::string_view scale_label(int level) {
  switch (level) {
    case 4: return "Ideal";
    case 3: return "Perfect";
    case 2: return "Acceptable";
    case 1: return "Partially Acceptable";
    case 0: return "Not Acceptable";
    default: throw out_of_range(std::nullopt, level);
  }
}

}  // namespace heval::rubric
