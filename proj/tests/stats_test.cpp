#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heval/analytics.hpp"
#include "heval/error.hpp"
#include "heval/stats.hpp"
#include "support.hpp"

using namespace heval;
using namespace heval::stats;
using heval::testing::make_campaign;
using heval::testing::uniform_vector;

namespace {

// Single-pass textbook formula in long double.
double direct_r(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const long double n = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) /
                             std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

analytics::RankTable table(std::vector<std::string> engines,
                           std::map<std::size_t, std::vector<int>> ranks) {
  analytics::RankTable t;
  t.engines = std::move(engines);
  t.ranks = std::move(ranks);
  return t;
}

ErrorCode error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::Io;
}

}  // namespace

TEST(Stats, PearsonKnownValue) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 5, 4, 5};
  EXPECT_NEAR(pearson_r(x, y), std::sqrt(0.6), 1e-15);
  const std::vector<double> neg{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(pearson_r(x, neg), -1.0);
}

TEST(Stats, PearsonMatchesDirectFormula) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(100), y(100);
    for (std::size_t i = 0; i < 100; ++i) {
      x[i] = noise(rng);
      y[i] = 0.4 * x[i] + noise(rng);
    }
    EXPECT_NEAR(pearson_r(x, y), direct_r(x, y), 1e-12);
  }
}

TEST(Stats, PearsonAffineInvariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(60), y(60), ax(60), ay(60);
    for (std::size_t i = 0; i < 60; ++i) {
      x[i] = u(rng);
      y[i] = x[i] * x[i] + 0.3 * u(rng);
    }
    const double a = 0.5 + 3 * u(rng), b = 10 * u(rng) - 5;
    const double c = -(0.5 + 3 * u(rng)), d = 10 * u(rng);
    for (std::size_t i = 0; i < 60; ++i) {
      ax[i] = a * x[i] + b;
      ay[i] = c * y[i] + d;
    }
    EXPECT_NEAR(pearson_r(ax, ay), -pearson_r(x, y), 1e-12);
    EXPECT_NEAR(pearson_r(y, x), pearson_r(x, y), 1e-15);
  }
}

TEST(Stats, PearsonErrors) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{1, 2};
  const std::vector<double> flat{2, 2, 2};
  const std::vector<double> one{1};
  EXPECT_EQ(error_of([&] { pearson_r(a, b); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(error_of([&] { pearson_r(a, flat); }), ErrorCode::ZeroVariance);
  EXPECT_EQ(error_of([&] { pearson_r(one, one); }), ErrorCode::TooFewSamples);
}

TEST(Stats, CriticalValue) {
  EXPECT_NEAR(normal_critical_value(0.95), 1.9599639845400536, 1e-12);
  EXPECT_NEAR(normal_critical_value(0.90), 1.6448536269514715, 1e-12);
  EXPECT_THROW(normal_critical_value(1.0), Error);
}

// Endpoints from Python's statistics.NormalDist and math.tanh/atanh.
TEST(Stats, FisherIntervalValues) {
  auto ci = fisher_ci(0.5, 100);
  EXPECT_NEAR(ci.low, 0.33664330440909174, 1e-12);
  EXPECT_NEAR(ci.high, 0.6341398407485443, 1e-12);
  ci = fisher_ci(-0.3, 20);
  EXPECT_NEAR(ci.low, -0.6554991792950994, 1e-12);
  EXPECT_NEAR(ci.high, 0.16433762668012192, 1e-12);
  ci = fisher_ci(0.9, 4);
  EXPECT_NEAR(ci.low, -0.4524244338345248, 1e-12);
  EXPECT_NEAR(ci.high, 0.9979134922969899, 1e-12);
}

TEST(Stats, FisherIntervalShape) {
  double prev_low = -1, prev_high = -1;
  for (int i = -99; i <= 99; ++i) {
    const double r = i / 100.0;
    const auto ci = fisher_ci(r, 30);
    EXPECT_GT(ci.low, -1.0);
    EXPECT_LT(ci.high, 1.0);
    EXPECT_LT(ci.low, r);
    EXPECT_GT(ci.high, r);
    EXPECT_GT(ci.low, prev_low);
    EXPECT_GT(ci.high, prev_high);
    prev_low = ci.low;
    prev_high = ci.high;
  }
  const auto narrow = fisher_ci(0.4, 1000);
  const auto wide = fisher_ci(0.4, 10);
  EXPECT_LT(narrow.high - narrow.low, wide.high - wide.low);
  EXPECT_EQ(error_of([] { fisher_ci(1.0, 50); }), ErrorCode::DegenerateR);
  EXPECT_EQ(error_of([] { fisher_ci(0.2, 3); }), ErrorCode::TooFewSamples);
}

TEST(Stats, AgreementOnHandTables) {
  const auto a = table({"E1", "E2", "E3"}, {{0, {1, 2, 3}}, {1, {1, 1, 3}}, {2, {3, 1, 2}}});
  const auto b = table({"E1", "E2", "E3"}, {{0, {1, 3, 2}}, {1, {2, 1, 3}}, {2, {2, 1, 3}}});
  const auto hr = highest_rank_agreement(a, b);
  EXPECT_EQ(hr.count, 2u);  // sentence 0 (E1) and 2 (E2); sentence 1 credits E1 vs E2
  EXPECT_EQ(hr.total, 3u);
  EXPECT_EQ(hr.percentage(), Rational(200, 3));
  EXPECT_EQ(enginewise_rank_agreement(a, b, "E1").count, 1u);
  EXPECT_EQ(enginewise_rank_agreement(a, b, "E2").count, 2u);
  EXPECT_EQ(enginewise_rank_agreement(a, b, "E3").count, 1u);
  EXPECT_EQ(error_of([&] { enginewise_rank_agreement(a, b, "E4"); }), ErrorCode::UnknownEngine);
}

TEST(Stats, AgreementReflexiveAndSymmetric) {
  std::mt19937_64 rng(3);
  auto c = make_campaign(40, 4, 2);
  heval::testing::fill_random(c, rng, 0.3);
  const auto view = analytics::full_view(std::make_shared<const Campaign>(c));
  const auto a = analytics::rank_sentences(analytics::score_matrix(view, "J1"), view.engines());
  const auto b = analytics::rank_sentences(analytics::score_matrix(view, "J2"), view.engines());
  EXPECT_EQ(highest_rank_agreement(a, a).percentage(), Rational(100));
  EXPECT_EQ(highest_rank_agreement(a, b).count, highest_rank_agreement(b, a).count);
  for (const auto& e : view.engines()) {
    EXPECT_EQ(enginewise_rank_agreement(a, a, e).percentage(), Rational(100));
    EXPECT_EQ(enginewise_rank_agreement(a, b, e).count, enginewise_rank_agreement(b, a, e).count);
  }
}

TEST(Stats, SentenceSetMismatch) {
  const auto a = table({"E1", "E2"}, {{0, {1, 2}}, {1, {1, 2}}});
  const auto b = table({"E1", "E2"}, {{0, {1, 2}}, {2, {1, 2}}});
  const auto c = table({"E1", "E3"}, {{0, {1, 2}}, {1, {1, 2}}});
  EXPECT_EQ(error_of([&] { highest_rank_agreement(a, b); }), ErrorCode::SentenceSetMismatch);
  EXPECT_EQ(error_of([&] { highest_rank_agreement(a, c); }), ErrorCode::SentenceSetMismatch);
  const auto [ca, cb] = common_sentences(a, b);
  EXPECT_EQ(ca.ranks.size(), 1u);
  EXPECT_EQ(highest_rank_agreement(ca, cb).count, 1u);
}

TEST(Stats, EmptyAgreementIsZero) {
  EXPECT_EQ(AgreementResult{}.percentage(), Rational(0));
}

TEST(Stats, IndependentJudgesAgreeAtCollisionRate) {
  // Two independent uniform ranking judges over 4 distinct-score engines
  // agree on the top engine with probability 1/4.
  std::mt19937_64 rng(77);
  std::map<std::size_t, std::vector<int>> ra, rb;
  std::vector<int> perm{1, 2, 3, 4};
  for (std::size_t s = 0; s < 20000; ++s) {
    std::shuffle(perm.begin(), perm.end(), rng);
    ra[s] = perm;
    std::shuffle(perm.begin(), perm.end(), rng);
    rb[s] = perm;
  }
  const auto r = highest_rank_agreement(table({"A", "B", "C", "D"}, ra),
                                        table({"A", "B", "C", "D"}, rb));
  EXPECT_NEAR(to_double(r.percentage()), 25.0, 5 * 100 * std::sqrt(0.25 * 0.75 / 20000));
}

TEST(Stats, CorrelationStatuses) {
  auto c = make_campaign(8, 3, 1);
  for (std::size_t s = 0; s < 8; ++s) {
    const int level = static_cast<int>(s % 5);
    c.record_annotation("J1", s, "E1", uniform_vector(level));
    c.record_external_score(s, "E1", Measure::Adequacy, level + 1);
    c.record_annotation("J1", s, "E2", uniform_vector(2));
    c.record_external_score(s, "E2", Measure::Adequacy, 1 + static_cast<int>(s % 3));
    if (s < 3) {
      c.record_annotation("J1", s, "E3", uniform_vector(1));
      c.record_external_score(s, "E3", Measure::Adequacy, 2);
    }
  }
  const auto view = analytics::full_view(std::make_shared<const Campaign>(c));
  const auto results = heval_vs_external(view, "J1", Measure::Adequacy);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(results[0].second.status, CorrelationStatus::Perfect);
  EXPECT_EQ(results[0].second.r, 1.0);
  EXPECT_EQ(results[0].second.n, 8u);
  EXPECT_EQ(results[1].second.status, CorrelationStatus::ZeroVariance);
  EXPECT_EQ(results[2].second.status, CorrelationStatus::NoOverlap);
  EXPECT_EQ(results[2].second.n, 3u);
  EXPECT_EQ(error_of([&] { correlate_engine(view, "J1", "E3", Measure::Adequacy); }),
            ErrorCode::NoOverlap);
  EXPECT_EQ(heval_vs_external(view, "J1", Measure::Fluency)[0].second.status,
            CorrelationStatus::NoOverlap);
}

TEST(Stats, CorrelationWithNoise) {
  std::mt19937_64 rng(9);
  auto c = make_campaign(200, 1, 1);
  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < 200; ++s) {
    const auto raw = heval::testing::random_raw(rng, 0.1);
    c.record_annotation("J1", s, "E1", rubric::validate_vector(raw));
    const double score = heval::testing::naive_score(raw);
    const int level = std::clamp(static_cast<int>(std::lround(1 + 4 * score +
                                                              std::normal_distribution<>(0, 0.7)(rng))),
                                 1, 5);
    c.record_external_score(s, "E1", Measure::Fluency, level);
    xs.push_back(score);
    ys.push_back(level);
  }
  const auto view = analytics::full_view(std::make_shared<const Campaign>(c));
  const auto r = correlate_engine(view, "J1", "E1", Measure::Fluency);
  EXPECT_EQ(r.status, CorrelationStatus::Ok);
  EXPECT_NEAR(r.r, direct_r(xs, ys), 1e-12);
  EXPECT_GT(r.r, 0.0);
  EXPECT_LT(r.ci_low, r.r);
  EXPECT_GT(r.ci_high, r.r);
}
