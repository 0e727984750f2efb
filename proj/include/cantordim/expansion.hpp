#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cantordim/core_model.hpp"
#include "cantordim/rational.hpp"

namespace cantordim {

/// Digits eps_1..eps_n of a Cantor series over a base pattern, with
/// 0 <= eps_i < b_i.
class DigitString {
 public:
  DigitString(std::vector<std::uint32_t> digits, BasePattern bases);

  std::size_t depth() const noexcept { return digits_.size(); }
  const std::vector<std::uint32_t>& digits() const noexcept { return digits_; }
  const BasePattern& bases() const noexcept { return bases_; }
  std::uint32_t base_at(std::size_t position) const noexcept { return bases_.base_at(position); }

  DigitString prefix(std::size_t n) const;
  /// This string followed by one more digit.
  DigitString extended(std::uint32_t digit) const;

  friend bool operator==(const DigitString&, const DigitString&) = default;

 private:
  std::vector<std::uint32_t> digits_;
  BasePattern bases_;
};

/// Greedy digit extraction on the exact remainder: eps_i = floor(r * b_i),
/// r <- r * b_i - eps_i. Points with two expansions get the floor one.
DigitString expand(const BigRational& x, const BasePattern& bases, std::size_t n);
/// Uses the exact binary value of x.
DigitString expand(double x, const BasePattern& bases, std::size_t n);

/// sum eps_i / (b_1...b_i) by backward Horner accumulation.
double evaluate(const DigitString& s);
BigRational evaluate_exact(const DigitString& s);

inline constexpr std::size_t kExactCylinderDepth = 64;

/// Half-open interval [lower, lower + length) of reals sharing a digit prefix.
/// Exact endpoints are only kept up to kExactCylinderDepth; beyond that only
/// the log-length is meaningful.
struct Cylinder {
  std::size_t depth = 0;
  double lower = 0.0;
  double log_length = 0.0;
  std::optional<BigRational> exact_lower;
  std::optional<BigRational> exact_length;
};

Cylinder cylinder(const DigitString& s);

/// Exact digit counts of a finite prefix.
struct FrequencyStats {
  std::uint64_t n = 0;
  std::map<std::uint32_t, std::uint64_t> tau;                                   // digit j
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> tau_joint;  // (base k, digit j)
  std::map<std::uint32_t, std::uint64_t> base_counts;                           // D_k(n)

  std::uint64_t digit_count(std::uint32_t j) const;
  std::uint64_t joint_count(std::uint32_t k, std::uint32_t j) const;
  std::uint64_t base_count(std::uint32_t k) const;
};

FrequencyStats digit_stats(const DigitString& s);

}  // namespace cantordim
