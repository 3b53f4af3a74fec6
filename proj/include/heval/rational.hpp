#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace heval {

/// Exact score arithmetic. All aggregation is done on these; decimals only
/// appear at presentation time.
using Rational = boost::rational<std::int64_t>;

/// Formats `value` with exactly `decimals` fractional digits, rounding
/// half away from zero (half-up for the non-negative values used here).
std::string format_fixed(const Rational& value, int decimals);

/// `value` rounded half-up to `decimals` digits, still as an exact rational.
Rational round_half_up(const Rational& value, int decimals);

double to_double(const Rational& value);

/// "num/den" in lowest terms.
std::string to_fraction_string(const Rational& value);

/// Parses a plain decimal literal such as "64.77" or "0.4" exactly.
Rational parse_decimal(const std::string& text);

}  // namespace heval
