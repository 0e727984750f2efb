#include "cantordim/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "cantordim/errors.hpp"

namespace cantordim {

namespace {

BigRational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  std::int64_t scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("malformed number '" + std::string(text) + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    std::int64_t exponent = 0;
    bool exp_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exponent = exponent * 10 + (text[i] - '0');
      exp_digit = true;
      if (exponent > 4000) throw ParseError("exponent too large in '" + std::string(text) + "'");
    }
    if (!exp_digit) throw ParseError("malformed exponent in '" + std::string(text) + "'");
    scale += exp_negative ? -exponent : exponent;
  }
  if (i != text.size()) throw ParseError("trailing characters in '" + std::string(text) + "'");

  BigInt power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(scale)));
  BigRational value = scale >= 0 ? BigRational(mantissa * power) : BigRational(mantissa, power);
  return negative ? BigRational(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double to_double(const BigRational& r) {
  return r.convert_to<double>();
}

BigRational parse_big_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty number");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  BigRational num = parse_decimal(trim(text.substr(0, slash)));
  BigRational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

Rational parse_rational(std::string_view text) {
  const BigRational value = parse_big_rational(text);
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  const BigInt limit = std::numeric_limits<std::int64_t>::max();
  if (abs(num) > limit || den > limit) {
    throw ParseError("rational '" + std::string(text) + "' does not fit in 64 bits");
  }
  return Rational(num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>());
}

BigRational exact_from_double(double x) {
  if (!std::isfinite(x)) throw ParseError("non-finite value");
  if (x == 0.0) return BigRational(0);
  int exponent = 0;
  const double fraction = std::frexp(x, &exponent);
  // fraction * 2^53 is an exact integer.
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
  exponent -= 53;
  BigInt m = mantissa;
  if (exponent >= 0) return BigRational(m << exponent);
  return BigRational(m, BigInt(1) << -exponent);
}

std::optional<Rational> recover_rational(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x) || x < 0.0) return std::nullopt;
  // Convergents h/k of the continued fraction of x.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double rest = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - x) <= tol) {
      return Rational(h, k);
    }
    if (rest < 1e-300) break;
    const double inv = 1.0 / rest;
    const double a_real = std::floor(inv);
    if (a_real > static_cast<double>(max_den)) break;
    const auto a = static_cast<std::int64_t>(a_real);
    rest = inv - a_real;
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

}  // namespace cantordim
