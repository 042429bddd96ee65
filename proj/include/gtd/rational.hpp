#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace gtd {

// Exact arithmetic used throughout the verification layer.  Simulation code
// converts to double only at the point where rates feed a random clock.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Renders "p" when the denominator is 1, otherwise "p/q".
std::string rational_to_string(const Rational& r);

// Accepts optional sign, "p" or "p/q" with integer p, q (q > 0 after
// normalisation).  Returns nullopt on anything else -- in particular decimal
// floats are rejected so that exact suites cannot be fed rounded input.
std::optional<Rational> parse_rational(const std::string& text);

// Largest integer <= r.
Integer rational_floor(const Rational& r);

}  // namespace gtd
