#include "doa/rational.hpp"

#include "doa/errors.hpp"

#include <cctype>
#include <limits>

namespace doa {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(std::size_t k) {
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

std::optional<Rational> try_parse_decimal(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(s.begin());
  }
  auto dot = s.find('.');
  std::string int_part = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

  BigInt num = int_part.empty() ? BigInt(0) : BigInt(int_part);
  BigInt den = 1;
  if (!frac_part.empty()) {
    den = pow10(frac_part.size());
    num = num * den + BigInt(frac_part);
  }
  if (negative) num = -num;
  return Rational(num, den);
}

Rational parse_decimal(const std::string& text) {
  auto r = try_parse_decimal(text);
  if (!r) throw ParseError("not a decimal literal: '" + text + "'");
  return *r;
}

std::string format_exact(const Rational& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;

  // Count the 2s and 5s in the denominator; anything else cannot be
  // written as a finite decimal.
  BigInt rest = den;
  std::size_t twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) {
    std::string s = num.str() + "/" + den.str();
    return negative ? "-" + s : s;
  }

  std::size_t k = twos > fives ? twos : fives;
  for (std::size_t i = fives; i < k; ++i) num *= 5;
  for (std::size_t i = twos; i < k; ++i) num *= 2;

  std::string digits = num.str();
  std::string out;
  if (k == 0) {
    out = digits;
  } else {
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return negative ? "-" + out : out;
}

BigInt floor_to_int(const Rational& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

BigInt ceil_to_int(const Rational& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

std::int64_t to_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw Error("integer out of int64 range: " + value.str());
  }
  return value.convert_to<std::int64_t>();
}

}  // namespace doa
