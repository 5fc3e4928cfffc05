#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace doa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Prices are stored as integer multiples of the grid epsilon.
using Tick = std::int64_t;

/// Parses a plain decimal string ("0.2001", "1", ".5") into an exact rational.
/// No binary-float intermediate is involved. Throws ParseError on bad input.
Rational parse_decimal(const std::string& text);

std::optional<Rational> try_parse_decimal(const std::string& text);

/// Formats a rational exactly. Values whose reduced denominator is of the
/// form 2^a 5^b print as plain decimals ("0.2001"); everything else prints
/// as "num/den".
std::string format_exact(const Rational& value);

BigInt floor_to_int(const Rational& value);
BigInt ceil_to_int(const Rational& value);

/// Checked narrowing; throws Error on overflow.
std::int64_t to_int64(const BigInt& value);

}  // namespace doa
