#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace catmeas {

/// Exact rational scalar. Expression templates are disabled so that `auto`
/// always binds a value.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Parses "p", "-p" or "p/q" (q > 0) into a canonical rational. Throws
/// Error{ErrorCode::SyntaxError} on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering; integers render without a denominator.
std::string to_string(const Rational& value);

inline Rational rabs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace catmeas
