#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ergocheck {

using Integer = mpz_class;
using Rational = mpq_class;

using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Accepts "7", "-3/4", "0.5", "1e-3", "2.5E+2". Decimal literals are
// converted exactly. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::vector<std::string> to_strings(const RationalVector& v);
RationalVector parse_rationals(const std::vector<std::string>& v);

}  // namespace ergocheck
