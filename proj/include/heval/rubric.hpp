#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "heval/rational.hpp"

namespace heval::rubric {

inline constexpr std::size_t kFeatureCount = 11;
inline constexpr int kMinLevel = 0;
inline constexpr int kMaxLevel = 4;

struct Feature {
  int ordinal;  // 1-based
  std::string_view short_name;
  std::string_view description;
};

/// The eleven linguistic features, in rubric order.
const std::array<Feature, kFeatureCount>& features();

const Feature& feature(int ordinal);

/// One judge's verdict on one feature: a level in 0..4, or not applicable.
class FeatureScore {
 public:
  static FeatureScore not_applicable() { return FeatureScore{}; }
  /// Throws OutOfRange (ordinal left unset) for levels outside 0..4.
  static FeatureScore applicable(int level);

  bool is_applicable() const noexcept { return level_.has_value(); }
  /// Precondition: is_applicable().
  int level() const { return *level_; }
  std::optional<int> as_optional() const noexcept { return level_; }

  friend bool operator==(const FeatureScore&, const FeatureScore&) = default;

 private:
  FeatureScore() = default;
  explicit FeatureScore(int level) : level_(level) {}
  std::optional<int> level_;
};

/// Eleven feature scores with at least one applicable entry.
class AnnotationVector {
 public:
  using Scores = std::array<FeatureScore, kFeatureCount>;

  /// Throws AllNotApplicable when every entry is NA.
  explicit AnnotationVector(const Scores& scores);

  const Scores& scores() const noexcept { return scores_; }
  /// 1-based, matching feature ordinals.
  const FeatureScore& at(int ordinal) const;

  friend bool operator==(const AnnotationVector&, const AnnotationVector&) = default;

 private:
  Scores scores_;
};

/// Final score kept as an integer pair; value() is exact.
struct SentenceScore {
  int numerator = 0;         // sum of applicable levels
  int applicable_count = 1;  // 1..11

  Rational value() const { return Rational(numerator, 4 * applicable_count); }

  friend bool operator==(const SentenceScore&, const SentenceScore&) = default;
};

/// Builds a vector from 11 raw slots (nullopt = NA).
/// Errors: LengthMismatch, OutOfRange(ordinal, value), AllNotApplicable.
AnnotationVector validate_vector(std::span<const std::optional<int>> raw);

/// Sum of applicable levels over 4 x (number of applicable features).
/// NA entries are dropped from both numerator and denominator.
SentenceScore final_score(const AnnotationVector& v);

/// Table label for a scale level. Throws OutOfRange outside 0..4.
std::string_view scale_label(int level);

}  // namespace heval::rubric
