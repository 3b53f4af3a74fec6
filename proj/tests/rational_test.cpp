#include <gtest/gtest.h>

#include <random>

#include "heval/error.hpp"
#include "heval/rational.hpp"

using heval::Rational;

TEST(Rational, FormatRoundsHalfUp) {
  EXPECT_EQ(heval::format_fixed(Rational(29, 40), 2), "0.73");
  EXPECT_EQ(heval::format_fixed(Rational(9, 40), 2), "0.23");
  EXPECT_EQ(heval::format_fixed(Rational(37, 40), 2), "0.93");
  EXPECT_EQ(heval::format_fixed(Rational(1, 8), 2), "0.13");
  EXPECT_EQ(heval::format_fixed(Rational(-1, 8), 2), "-0.13");
  EXPECT_EQ(heval::format_fixed(Rational(2, 3), 4), "0.6667");
  EXPECT_EQ(heval::format_fixed(Rational(4, 5), 4), "0.8000");
  EXPECT_EQ(heval::format_fixed(Rational(1), 4), "1.0000");
  EXPECT_EQ(heval::format_fixed(Rational(0), 2), "0.00");
  EXPECT_EQ(heval::format_fixed(Rational(7, 2), 0), "4");
}

TEST(Rational, FormatSmallFractionsPadZeros) {
  EXPECT_EQ(heval::format_fixed(Rational(1, 1000), 4), "0.0010");
  EXPECT_EQ(heval::format_fixed(Rational(-1, 1000), 4), "-0.0010");
  EXPECT_EQ(heval::format_fixed(Rational(1, 100000), 4), "0.0000");
}

TEST(Rational, PercentagesOverThirteenHundred) {
  EXPECT_EQ(heval::format_fixed(Rational(84200, 1300), 2), "64.77");
  EXPECT_EQ(heval::format_fixed(Rational(84900, 1300), 2), "65.31");
  EXPECT_EQ(heval::format_fixed(Rational(106700, 1300), 2), "82.08");
}

TEST(Rational, RoundHalfUpMatchesDecimalOracle) {
  // Oracle: integer arithmetic on num * 10^d, compared digit for digit.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(0, 1'000'000);
  std::uniform_int_distribution<std::int64_t> den(1, 50'000);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t n = num(rng);
    const std::int64_t d = den(rng);
    const std::int64_t scaled2 = n * 10000 * 2;
    const std::int64_t units = (scaled2 + d) / (2 * d);
    EXPECT_EQ(heval::round_half_up(Rational(n, d), 4), Rational(units, 10000)) << n << "/" << d;
  }
}

TEST(Rational, ParseDecimalIsExact) {
  EXPECT_EQ(heval::parse_decimal("64.77"), Rational(6477, 100));
  EXPECT_EQ(heval::parse_decimal("0.4"), Rational(2, 5));
  EXPECT_EQ(heval::parse_decimal("-1.5"), Rational(-3, 2));
  EXPECT_EQ(heval::parse_decimal("3"), Rational(3));
  EXPECT_EQ(heval::parse_decimal(".5"), Rational(1, 2));
}

TEST(Rational, ParseDecimalRejectsJunk) {
  for (const char* bad : {"", "-", ".", "1.2.3", "1e5", "abc", " 1", "12345678901234567890"}) {
    EXPECT_THROW(heval::parse_decimal(bad), heval::Error) << bad;
  }
}

TEST(Rational, FractionString) {
  EXPECT_EQ(heval::to_fraction_string(Rational(32, 40)), "4/5");
  EXPECT_DOUBLE_EQ(heval::to_double(Rational(29, 40)), 0.725);
}
