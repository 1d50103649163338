#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace bml {

using Rational = boost::rational<std::int64_t>;

// Accepts "0.52", "13/25", "1", ".5". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Decimal rendering rounded half-up to `places` fractional digits. Non-negative values only.
std::string to_decimal(const Rational& q, int places = 5);

double to_double(const Rational& q);

// round(q * n), ties rounded up. q must be non-negative.
std::int64_t round_half_up(const Rational& q, std::int64_t n);

}  // namespace bml
