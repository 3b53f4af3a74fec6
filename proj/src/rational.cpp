#include "heval/rational.hpp"

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "heval/error.hpp"

namespace heval {

namespace {

std::int64_t pow10(int decimals) {
  std::int64_t p = 1;
  for (int i = 0; i < decimals; ++i) p *= 10;
  return p;
}

}  // namespace

Rational round_half_up(const Rational& value, int decimals) {
  const std::int64_t scale = pow10(decimals);
  const bool negative = value < 0;
  const Rational magnitude = negative ? -value : value;
  // floor(|v| * scale + 1/2), computed in 128 bits.
  const __int128 num = static_cast<__int128>(magnitude.numerator()) * scale * 2 +
                       magnitude.denominator();
  const __int128 den = static_cast<__int128>(magnitude.denominator()) * 2;
  const auto units = static_cast<std::int64_t>(num / den);
  return Rational(negative ? -units : units, scale);
}

std::string format_fixed(const Rational& value, int decimals) {
  const Rational rounded = round_half_up(value, decimals);
  const std::int64_t scale = pow10(decimals);
  std::int64_t units = rounded.numerator() * (scale / rounded.denominator());
  const bool negative = units < 0;
  if (negative) units = -units;
  std::string out = negative ? "-" : "";
  out += std::to_string(units / scale);
  if (decimals > 0) {
    std::string frac = std::to_string(units % scale);
    out += '.';
    out += std::string(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

std::string to_fraction_string(const Rational& value) {
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::int64_t units = 0;
  std::int64_t scale = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (units > (INT64_MAX - 9) / 10 || scale > INT64_MAX / 10) {
        throw Error(ErrorCode::InvalidArgument, "too many digits: " + text);
      }
      units = units * 10 + (c - '0');
      if (seen_point) scale *= 10;
      seen_digit = true;
    } else {
      throw Error(ErrorCode::InvalidArgument, "not a decimal number: " + text);
    }
  }
  if (!seen_digit) throw Error(ErrorCode::InvalidArgument, "not a decimal number: " + text);
  return Rational(negative ? -units : units, scale);
}

}  // namespace heval
