#include <gtest/gtest.h>

#include "heval/corpus.hpp"
#include "heval/reference_fixtures.hpp"
#include "heval/rubric.hpp"
#include "support.hpp"

using namespace heval;

TEST(Reference, VerificationPasses) {
  const auto v = reference::verify();
  EXPECT_EQ(v.score_checks.size(), 10u);
  EXPECT_EQ(v.percentage_checks.size(), 7u);
  for (const auto& c : v.score_checks) EXPECT_TRUE(c.passed) << c.label << " " << c.computed;
  for (const auto& c : v.percentage_checks) EXPECT_TRUE(c.passed) << c.label << " " << c.computed;
  EXPECT_TRUE(v.passed());
}

// Sums worked by hand from the bundled vectors.
TEST(Reference, ExactScores) {
  const std::map<std::pair<std::string, int>, Rational> expected{
      {{"E1", 1}, Rational(32, 40)}, {{"E1", 2}, Rational(29, 40)},
      {{"E2", 1}, Rational(37, 40)}, {{"E2", 2}, Rational(38, 40)},
      {{"E3", 1}, Rational(14, 40)}, {{"E3", 2}, Rational(12, 40)},
      {{"E4", 1}, Rational(12, 40)}, {{"E4", 2}, Rational(9, 40)},
      {{"E5", 1}, Rational(16, 40)}, {{"E5", 2}, Rational(16, 40)}};
  for (const auto& a : reference::sentence_annotations()) {
    const auto s = rubric::final_score(rubric::validate_vector(a.scores));
    EXPECT_EQ(s.value(), expected.at({std::string(a.engine), a.judge})) << a.engine << a.judge;
    EXPECT_EQ(s.applicable_count, 10);
  }
}

TEST(Reference, TextsMatchDataFiles) {
  const std::string dir = std::string(HEVAL_TEST_DATA) + "/sentence150/";
  EXPECT_EQ(corpus::split_lines(heval::testing::read_text(dir + "source.txt")).at(0),
            reference::source_sentence());
  ASSERT_EQ(reference::engines().size(), 5u);
  for (const auto& e : reference::engines()) {
    const auto text = heval::testing::read_text(dir + std::string(e.id) + ".txt");
    EXPECT_EQ(corpus::split_lines(text).at(0), reference::engine_output(e.id));
  }
}

TEST(Reference, ExternalLevelsWithinScale) {
  ASSERT_EQ(reference::sentence_external_levels().size(), 5u);
  for (const auto& l : reference::sentence_external_levels()) {
    EXPECT_GE(l.adequacy, 1);
    EXPECT_LE(l.adequacy, 5);
    EXPECT_GE(l.fluency, 1);
    EXPECT_LE(l.fluency, 5);
  }
}
