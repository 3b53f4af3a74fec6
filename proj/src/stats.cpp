#include "heval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/distributions/normal.hpp>

#include "heval/error.hpp"

namespace heval::stats {

namespace {

void require_same_shape(const analytics::RankTable& a, const analytics::RankTable& b) {
  if (a.engines != b.engines) {
    throw Error(ErrorCode::SentenceSetMismatch, "rank tables cover different engine subsets");
  }
  if (a.ranks.size() != b.ranks.size()) {
    throw Error(ErrorCode::SentenceSetMismatch, "rank tables cover different sentence sets");
  }
  for (auto ia = a.ranks.begin(), ib = b.ranks.begin(); ia != a.ranks.end(); ++ia, ++ib) {
    if (ia->first != ib->first) {
      Error e(ErrorCode::SentenceSetMismatch, "rank tables cover different sentence sets");
      e.value = static_cast<std::int64_t>(ia->first);
      throw e;
    }
  }
}

// |r| this close to 1 is treated as exactly collinear data.
constexpr double kPerfectTolerance = 1e-12;

}  // namespace

Rational AgreementResult::percentage() const {
  if (total == 0) return Rational(0);
  return Rational(100 * static_cast<std::int64_t>(count), static_cast<std::int64_t>(total));
}

AgreementResult highest_rank_agreement(const analytics::RankTable& a,
                                       const analytics::RankTable& b) {
  require_same_shape(a, b);
  AgreementResult out{0, a.ranks.size()};
  for (const auto& [sentence, ranks] : a.ranks) {
    if (analytics::credited_engine(a, sentence) == analytics::credited_engine(b, sentence)) {
      ++out.count;
    }
  }
  return out;
}

AgreementResult enginewise_rank_agreement(const analytics::RankTable& a,
                                          const analytics::RankTable& b,
                                          std::string_view engine_id) {
  const std::size_t pos = a.engine_position(engine_id);
  require_same_shape(a, b);
  AgreementResult out{0, a.ranks.size()};
  for (const auto& [sentence, ranks] : a.ranks) {
    if (ranks[pos] == b.ranks.at(sentence)[pos]) ++out.count;
  }
  return out;
}

std::pair<analytics::RankTable, analytics::RankTable> common_sentences(
    const analytics::RankTable& a, const analytics::RankTable& b) {
  analytics::RankTable ca = a;
  analytics::RankTable cb = b;
  std::erase_if(ca.ranks, [&](const auto& kv) { return !b.ranks.contains(kv.first); });
  std::erase_if(cb.ranks, [&](const auto& kv) { return !a.ranks.contains(kv.first); });
  return {std::move(ca), std::move(cb)};
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    Error e(ErrorCode::LengthMismatch, "samples differ in length: " + std::to_string(x.size()) +
                                           " vs " + std::to_string(y.size()));
    e.value = static_cast<std::int64_t>(y.size());
    throw e;
  }
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "correlation needs at least 2 points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::ZeroVariance, sxx == 0.0 ? "first sample is constant"
                                                    : "second sample is constant");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence level must be in (0, 1)");
  }
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 1.0 - (1.0 - level) / 2.0);
}

ConfidenceInterval fisher_ci(double r, std::size_t n, double level) {
  if (n < 4) {
    Error e(ErrorCode::TooFewSamples, "Fisher interval needs n >= 4, got " + std::to_string(n));
    e.value = static_cast<std::int64_t>(n);
    throw e;
  }
  if (!(std::abs(r) < 1.0)) throw Error(ErrorCode::DegenerateR, "|r| must be below 1");
  const double z = std::atanh(r);
  const double half_width = normal_critical_value(level) / std::sqrt(static_cast<double>(n - 3));
  return {std::tanh(z - half_width), std::tanh(z + half_width)};
}

std::string_view correlation_status_name(CorrelationStatus s) {
  switch (s) {
    case CorrelationStatus::Ok: return "ok";
    case CorrelationStatus::Perfect: return "perfect";
    case CorrelationStatus::ZeroVariance: return "zero_variance";
    case CorrelationStatus::NoOverlap: return "no_overlap";
  }
  return "";
}

CorrelationResult correlate_engine(const analytics::CampaignView& view,
                                   std::string_view judge_id, std::string_view engine_id,
                                   Measure measure, double level) {
  const Campaign& campaign = view.campaign();
  campaign.judge(judge_id);
  campaign.engine_index(engine_id);
  std::vector<double> heval;
  std::vector<double> external;
  const auto& all = campaign.annotations();
  for (auto it = all.lower_bound(AnnotationKey{std::string(judge_id), 0, ""});
       it != all.end() && it->first.judge_id == judge_id; ++it) {
    if (it->first.engine_id != engine_id) continue;
    const auto ext = campaign.external_level(it->first.sentence, engine_id, measure);
    if (!ext) continue;
    heval.push_back(to_double(rubric::final_score(it->second.vector).value()));
    external.push_back(static_cast<double>(*ext));
  }

  CorrelationResult out;
  out.n = heval.size();
  out.level = level;
  if (out.n < 4) {
    Error e(ErrorCode::NoOverlap, "engine " + std::string(engine_id) + ": only " +
                                      std::to_string(out.n) + " paired sentences");
    e.subject = std::string(engine_id);
    e.value = static_cast<std::int64_t>(out.n);
    throw e;
  }
  try {
    out.r = pearson_r(heval, external);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroVariance) throw;
    out.status = CorrelationStatus::ZeroVariance;
    return out;
  }
  if (std::abs(out.r) >= 1.0 - kPerfectTolerance) {
    out.status = CorrelationStatus::Perfect;
    out.r = out.r > 0 ? 1.0 : -1.0;
    out.ci_low = out.ci_high = out.r;
    return out;
  }
  const auto ci = fisher_ci(out.r, out.n, level);
  out.ci_low = ci.low;
  out.ci_high = ci.high;
  return out;
}

std::vector<std::pair<std::string, CorrelationResult>> heval_vs_external(
    const analytics::CampaignView& view, std::string_view judge_id, Measure measure,
    double level) {
  std::vector<std::pair<std::string, CorrelationResult>> out;
  for (const auto& engine : view.engines()) {
    try {
      out.emplace_back(engine, correlate_engine(view, judge_id, engine, measure, level));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoOverlap) throw;
      CorrelationResult none;
      none.status = CorrelationStatus::NoOverlap;
      none.n = static_cast<std::size_t>(e.value.value_or(0));
      none.level = level;
      out.emplace_back(engine, none);
    }
  }
  return out;
}

}  // namespace heval::stats
