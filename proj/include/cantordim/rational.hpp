#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace cantordim {

/// Exact small rational used for frequencies (d_k = count/period etc).
using Rational = boost::rational<std::int64_t>;

/// Arbitrary-precision rational used for digit expansions and cylinders.
using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

double to_double(const BigRational& r);

/// Parses "p/q", a plain integer, or a finite decimal ("0.125", "1e-3") exactly.
/// Throws ParseError on malformed input.
BigRational parse_big_rational(std::string_view text);

/// Same as parse_big_rational but requires the result to fit in 64-bit parts.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
BigRational exact_from_double(double x);

/// Best rational approximation with denominator <= max_den (continued
/// fractions); returns nothing unless |x - p/q| <= tol.
std::optional<Rational> recover_rational(double x, std::int64_t max_den, double tol);

}  // namespace cantordim
