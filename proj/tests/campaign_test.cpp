#include <gtest/gtest.h>

#include "heval/campaign.hpp"
#include "heval/error.hpp"
#include "support.hpp"

using namespace heval;
using heval::testing::make_campaign;
using heval::testing::uniform_vector;

namespace {

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::Io;
}

}  // namespace

TEST(Campaign, JudgesRegisterOnce) {
  auto c = make_campaign(3, 2, 0);
  EXPECT_EQ(c.add_judge({"ana", ""}).display_name, "ana");
  EXPECT_EQ(error_of([&] { c.add_judge({"ana", "again"}); }), ErrorCode::DuplicateJudge);
  EXPECT_EQ(error_of([&] { c.add_judge({"a b", ""}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_of([&] { c.judge("bob"); }), ErrorCode::UnknownJudge);
}

TEST(Campaign, RevisionsIncrease) {
  auto c = make_campaign(3, 2, 1);
  const AnnotationKey key{"J1", 1, "E2"};
  EXPECT_EQ(c.current_revision(key), 0);
  EXPECT_EQ(c.record_annotation("J1", 1, "E2", uniform_vector(2)).revision, 1);
  EXPECT_EQ(c.record_annotation("J1", 1, "E2", uniform_vector(3)).revision, 2);
  EXPECT_EQ(c.find_annotation(key)->vector, uniform_vector(3));
  EXPECT_EQ(c.annotations().size(), 1u);
}

TEST(Campaign, UnknownIds) {
  auto c = make_campaign(3, 2, 1);
  const auto v = uniform_vector(1);
  EXPECT_EQ(error_of([&] { c.record_annotation("J9", 0, "E1", v); }), ErrorCode::UnknownJudge);
  EXPECT_EQ(error_of([&] { c.record_annotation("J1", 3, "E1", v); }),
            ErrorCode::UnknownSentence);
  EXPECT_EQ(error_of([&] { c.record_annotation("J1", 0, "E3", v); }), ErrorCode::UnknownEngine);
  EXPECT_TRUE(c.annotations().empty());
}

TEST(Campaign, ApplyRejectsOutOfSequenceRevision) {
  auto c = make_campaign(2, 1, 1);
  auto rec = c.prepare_annotation("J1", 0, "E1", uniform_vector(4));
  rec.revision = 3;
  EXPECT_EQ(error_of([&] { c.apply(rec); }), ErrorCode::SchemaViolation);
  rec.revision = 1;
  c.apply(rec);
  EXPECT_EQ(c.current_revision(rec.key()), 1);
}

TEST(Campaign, ExternalScoresRespectScale) {
  auto c = make_campaign(2, 2, 0);
  c.record_external_score(0, "E1", Measure::Adequacy, 5);
  c.record_external_score(0, "E1", Measure::Fluency, 1);
  EXPECT_EQ(c.external_level(0, "E1", Measure::Adequacy), 5);
  EXPECT_FALSE(c.external_level(1, "E1", Measure::Adequacy).has_value());
  EXPECT_EQ(error_of([&] { c.record_external_score(0, "E1", Measure::Adequacy, 0); }),
            ErrorCode::OutOfScale);
  EXPECT_EQ(error_of([&] { c.record_external_score(0, "E1", Measure::Adequacy, 6); }),
            ErrorCode::OutOfScale);
  EXPECT_EQ(c.record_external_score(0, "E1", Measure::Adequacy, 2).revision, 2);
}

TEST(Campaign, CustomScale) {
  CampaignConfig config;
  config.external_scale = {0, 4};
  Campaign c(config, heval::testing::make_corpus(1, 1));
  c.record_external_score(0, "E1", Measure::Fluency, 0);
  EXPECT_THROW(c.record_external_score(0, "E1", Measure::Fluency, 5), Error);
  config.external_scale = {5, 1};
  EXPECT_THROW(Campaign(config, heval::testing::make_corpus(1, 1)), Error);
}

TEST(Campaign, MeasureNames) {
  EXPECT_EQ(parse_measure("Adequacy"), Measure::Adequacy);
  EXPECT_EQ(parse_measure("FLUENCY"), Measure::Fluency);
  EXPECT_EQ(measure_name(Measure::Fluency), "fluency");
  EXPECT_THROW(parse_measure("grammar"), Error);
}

TEST(Campaign, CopiesAreIndependent) {
  auto a = make_campaign(2, 1, 1);
  Campaign b = a;
  b.record_annotation("J1", 0, "E1", uniform_vector(1));
  EXPECT_TRUE(a.annotations().empty());
  EXPECT_EQ(b.annotations().size(), 1u);
}
