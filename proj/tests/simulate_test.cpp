#include <gtest/gtest.h>

#include "heval/analytics.hpp"
#include "heval/error.hpp"
#include "heval/interchange.hpp"
#include "heval/simulate.hpp"
#include "heval/stats.hpp"
#include "support.hpp"

using namespace heval;
using namespace heval::simulate;

namespace {
SimulationResult run(const Campaign& c, const SimulationOptions& o) { return heval::simulate::simulate(c, o); }
}  // namespace

namespace {

Campaign synthetic(std::size_t sentences, std::size_t engines, std::uint64_t seed = 0) {
  CampaignConfig config;
  config.rng_seed = seed;
  const auto outputs = synthetic_outputs(sentences, engines);
  return Campaign(config, std::make_shared<const corpus::Corpus>(
                              corpus::import_corpus(synthetic_source(sentences), outputs)));
}

analytics::RankTable ranks_of(const std::shared_ptr<const Campaign>& c, const std::string& judge) {
  const auto view = analytics::full_view(c);
  return analytics::rank_sentences(analytics::score_matrix(view, judge), view.engines());
}

}  // namespace

TEST(Simulate, ParseProfiles) {
  EXPECT_EQ(parse_profile("identical").kind, NoiseProfile::Kind::Identical);
  EXPECT_EQ(parse_profile("independent-uniform").kind, NoiseProfile::Kind::IndependentUniform);
  const auto p = parse_profile("perturb(0.25,1)");
  EXPECT_EQ(p.kind, NoiseProfile::Kind::Perturb);
  EXPECT_DOUBLE_EQ(p.p, 0.25);
  EXPECT_EQ(p.delta, 1);
  EXPECT_EQ(profile_name(p), "perturb(0.25,1)");
  for (const char* bad : {"", "noisy", "perturb(0.2)", "perturb(1.5,1)", "perturb(0.2,9)",
                          "perturb(0.2,1)x"}) {
    EXPECT_THROW(parse_profile(bad), Error) << bad;
  }
}

TEST(Simulate, ParseQuality) {
  const auto q = parse_quality("E1=0.8, E2=0.25");
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[1].first, "E2");
  EXPECT_DOUBLE_EQ(q[1].second, 0.25);
  EXPECT_THROW(parse_quality("E1"), Error);
  EXPECT_THROW(parse_quality("E1=high"), Error);
}

TEST(Simulate, SyntheticOutputsDoNotNameEngines) {
  for (const auto& o : synthetic_outputs(20, 5)) {
    EXPECT_EQ(o.text.find(o.engine.id), std::string::npos);
    EXPECT_EQ(o.text.find(o.engine.display_name), std::string::npos);
  }
}

TEST(Simulate, Deterministic) {
  const auto c = synthetic(30, 3);
  SimulationOptions opts;
  opts.profile = parse_profile("perturb(0.3,1)");
  opts.seed = 99;
  opts.na_rate = 0.2;
  auto a = c, b = c;
  apply(a, run(c, opts));
  apply(b, run(c, opts));
  EXPECT_EQ(interchange::export_annotations_csv(a), interchange::export_annotations_csv(b));
  EXPECT_EQ(interchange::export_external_csv(a), interchange::export_external_csv(b));
  opts.seed = 100;
  auto d = c;
  apply(d, run(c, opts));
  EXPECT_NE(interchange::export_annotations_csv(a), interchange::export_annotations_csv(d));
}

TEST(Simulate, FillsEveryCell) {
  auto c = synthetic(12, 4);
  c.add_judge({"J1", "existing"});
  SimulationOptions opts;
  opts.judges = 3;
  const auto r = run(c, opts);
  ASSERT_EQ(r.judges.size(), 3u);
  EXPECT_EQ(r.judges[0].id, "J2");
  EXPECT_EQ(r.annotations.size(), 3u * 12 * 4);
  EXPECT_EQ(r.external.size(), 2u * 12 * 4);
  opts.external = false;
  EXPECT_TRUE(run(c, opts).external.empty());
}

TEST(Simulate, IdenticalProfileAgreesFully) {
  auto c = synthetic(100, 5);
  SimulationOptions opts;
  opts.seed = 4;
  apply(c, run(c, opts));
  const auto cp = std::make_shared<const Campaign>(c);
  const auto a = ranks_of(cp, "J1");
  const auto b = ranks_of(cp, "J2");
  EXPECT_EQ(stats::highest_rank_agreement(a, b).percentage(), Rational(100));
}

TEST(Simulate, NaIsSharedAcrossJudgesAndEngines) {
  auto c = synthetic(50, 3);
  SimulationOptions opts;
  opts.profile = parse_profile("independent-uniform");
  opts.na_rate = 0.5;
  opts.seed = 8;
  const auto r = run(c, opts);
  std::map<std::size_t, std::vector<bool>> pattern;
  std::size_t na = 0, total = 0;
  for (const auto& a : r.annotations) {
    std::vector<bool> p;
    for (const auto& f : a.vector.scores()) {
      p.push_back(f.is_applicable());
      na += !f.is_applicable();
      ++total;
    }
    auto [it, inserted] = pattern.emplace(a.sentence, p);
    if (!inserted) EXPECT_EQ(it->second, p);
  }
  EXPECT_NEAR(static_cast<double>(na) / total, 0.5, 0.08);
}

TEST(Simulate, QualityOrdersSystemScores) {
  auto c = synthetic(300, 3);
  SimulationOptions opts;
  opts.quality = parse_quality("E1=0.2,E2=0.8,E3=0.5");
  opts.seed = 12;
  apply(c, run(c, opts));
  const auto view = analytics::full_view(std::make_shared<const Campaign>(c));
  const auto sys = analytics::system_scores(analytics::score_matrix(view, "J1"), view);
  EXPECT_LT(sys.at("E1"), sys.at("E3"));
  EXPECT_LT(sys.at("E3"), sys.at("E2"));
  EXPECT_NEAR(to_double(sys.at("E2")), 0.8, 0.03);
}

TEST(Simulate, ExternalTracksScores) {
  auto c = synthetic(300, 1);
  SimulationOptions opts;
  opts.seed = 5;
  apply(c, run(c, opts));
  const auto view = analytics::full_view(std::make_shared<const Campaign>(c));
  const auto r = stats::correlate_engine(view, "J1", "E1", Measure::Adequacy);
  EXPECT_GT(r.r, 0.5);
}

TEST(Simulate, RejectsBadOptions) {
  const auto c = synthetic(3, 2);
  SimulationOptions opts;
  opts.judges = 0;
  EXPECT_THROW(run(c, opts), Error);
  opts.judges = 1;
  opts.na_rate = 1.0;
  EXPECT_THROW(run(c, opts), Error);
  opts.na_rate = 0.0;
  opts.quality = {{"E9", 0.5}};
  EXPECT_THROW(run(c, opts), Error);
  opts.quality = {{"E1", 1.5}};
  EXPECT_THROW(run(c, opts), Error);
}
