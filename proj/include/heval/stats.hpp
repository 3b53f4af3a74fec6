#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heval/analytics.hpp"
#include "heval/rational.hpp"

namespace heval::stats {

struct AgreementResult {
  std::size_t count = 0;
  std::size_t total = 0;

  /// Exact 100 * count / total (0 for an empty total).
  Rational percentage() const;
};

/// Sentences on which both judges credit the same engine with the top rank.
/// Throws SentenceSetMismatch unless both tables rank the same sentences
/// over the same engines.
AgreementResult highest_rank_agreement(const analytics::RankTable& a,
                                       const analytics::RankTable& b);

/// Sentences on which both judges give `engine_id` the same rank.
AgreementResult enginewise_rank_agreement(const analytics::RankTable& a,
                                          const analytics::RankTable& b,
                                          std::string_view engine_id);

/// Keeps only sentences ranked in both tables, so differently-covered
/// judges can still be compared.
std::pair<analytics::RankTable, analytics::RankTable> common_sentences(
    const analytics::RankTable& a, const analytics::RankTable& b);

/// Pearson product-moment correlation.
/// Errors: LengthMismatch (or fewer than 2 points), ZeroVariance.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

/// Two-sided normal critical value, 1.959964 for level 0.95.
double normal_critical_value(double level);

/// Fisher z interval: tanh(atanh(r) -/+ z_crit / sqrt(n - 3)).
/// Errors: DegenerateR for |r| >= 1, TooFewSamples for n < 4.
ConfidenceInterval fisher_ci(double r, std::size_t n, double level = 0.95);

enum class CorrelationStatus {
  Ok,
  Perfect,       // |r| == 1; the interval collapses to r
  ZeroVariance,  // one side is constant; r undefined
  NoOverlap,     // fewer than 4 paired sentences
};

std::string_view correlation_status_name(CorrelationStatus s);

struct CorrelationResult {
  CorrelationStatus status = CorrelationStatus::Ok;
  std::size_t n = 0;
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;

  bool has_r() const {
    return status == CorrelationStatus::Ok || status == CorrelationStatus::Perfect;
  }
};

/// Correlation of one judge's HEval scores with an external measure for a
/// single engine. Throws NoOverlap(engine) for fewer than 4 pairs.
CorrelationResult correlate_engine(const analytics::CampaignView& view,
                                   std::string_view judge_id, std::string_view engine_id,
                                   Measure measure, double level = 0.95);

/// correlate_engine for every engine in the view; failures are reported in
/// the status field instead of thrown.
std::vector<std::pair<std::string, CorrelationResult>> heval_vs_external(
    const analytics::CampaignView& view, std::string_view judge_id, Measure measure,
    double level = 0.95);

}  // namespace heval::stats
