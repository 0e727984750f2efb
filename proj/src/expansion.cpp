#include "cantordim/expansion.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cantordim/errors.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

DigitString::DigitString(std::vector<std::uint32_t> digits, BasePattern bases)
    : digits_(std::move(digits)), bases_(std::move(bases)) {
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    const auto b = bases_.base_at(i);
    if (digits_[i] >= b) throw InvalidDigit(i, digits_[i], b);
  }
}

DigitString DigitString::prefix(std::size_t n) const {
  if (n >= digits_.size()) return *this;
  return DigitString({digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(n)}, bases_);
}

DigitString DigitString::extended(std::uint32_t digit) const {
  auto digits = digits_;
  digits.push_back(digit);
  return DigitString(std::move(digits), bases_);
}

DigitString expand(const BigRational& x, const BasePattern& bases, std::size_t n) {
  if (x < 0 || x >= 1) {
    std::ostringstream os;
    os << x;
    throw OutOfRange(os.str());
  }
  BigInt remainder = boost::multiprecision::numerator(x);
  const BigInt denominator = boost::multiprecision::denominator(x);
  std::vector<std::uint32_t> digits;
  digits.reserve(n);

  if (denominator <= BigInt(std::numeric_limits<std::int64_t>::max())) {
    __extension__ typedef unsigned __int128 wide;
    const auto q = denominator.convert_to<std::uint64_t>();
    auto r = remainder.convert_to<std::uint64_t>();
    for (std::size_t i = 0; i < n; ++i) {
      const wide scaled = static_cast<wide>(r) * bases.base_at(i);
      digits.push_back(static_cast<std::uint32_t>(scaled / q));
      r = static_cast<std::uint64_t>(scaled % q);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const BigInt scaled = remainder * bases.base_at(i);
      BigInt digit;
      boost::multiprecision::divide_qr(scaled, denominator, digit, remainder);
      digits.push_back(digit.convert_to<std::uint32_t>());
    }
  }
  return DigitString(std::move(digits), bases);
}

DigitString expand(double x, const BasePattern& bases, std::size_t n) {
  if (!(x >= 0.0 && x < 1.0)) throw OutOfRange(std::to_string(x));
  return expand(exact_from_double(x), bases, n);
}

double evaluate(const DigitString& s) {
  double value = 0.0;
  for (std::size_t i = s.depth(); i-- > 0;) {
    value = (static_cast<double>(s.digits()[i]) + value) / static_cast<double>(s.base_at(i));
  }
  return value;
}

namespace {

// Numerator N and denominator b_1...b_n of the digit string's value.
std::pair<BigInt, BigInt> exact_parts(const DigitString& s) {
  BigInt numerator = 0;
  BigInt denominator = 1;
  for (std::size_t i = 0; i < s.depth(); ++i) {
    const auto b = s.base_at(i);
    numerator = numerator * b + s.digits()[i];
    denominator *= b;
  }
  return {numerator, denominator};
}

}  // namespace

BigRational evaluate_exact(const DigitString& s) {
  auto [numerator, denominator] = exact_parts(s);
  return BigRational(numerator, denominator);
}

Cylinder cylinder(const DigitString& s) {
  Cylinder c;
  c.depth = s.depth();
  c.lower = evaluate(s);
  CompensatedSum log_len;
  for (std::size_t i = 0; i < s.depth(); ++i) log_len += -std::log(static_cast<double>(s.base_at(i)));
  c.log_length = log_len.value();
  if (s.depth() <= kExactCylinderDepth) {
    auto [numerator, denominator] = exact_parts(s);
    c.exact_lower = BigRational(numerator, denominator);
    c.exact_length = BigRational(BigInt(1), denominator);
  }
  return c;
}

std::uint64_t FrequencyStats::digit_count(std::uint32_t j) const {
  const auto it = tau.find(j);
  return it == tau.end() ? 0 : it->second;
}

std::uint64_t FrequencyStats::joint_count(std::uint32_t k, std::uint32_t j) const {
  const auto it = tau_joint.find({k, j});
  return it == tau_joint.end() ? 0 : it->second;
}

std::uint64_t FrequencyStats::base_count(std::uint32_t k) const {
  const auto it = base_counts.find(k);
  return it == base_counts.end() ? 0 : it->second;
}

FrequencyStats digit_stats(const DigitString& s) {
  FrequencyStats stats;
  stats.n = s.depth();
  for (std::size_t i = 0; i < s.depth(); ++i) {
    const auto k = s.base_at(i);
    const auto j = s.digits()[i];
    ++stats.tau[j];
    ++stats.tau_joint[{k, j}];
    ++stats.base_counts[k];
  }
  return stats;
}

}  // namespace cantordim
