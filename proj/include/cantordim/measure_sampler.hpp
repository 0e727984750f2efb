#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cantordim/core_model.hpp"
#include "cantordim/expansion.hpp"

namespace cantordim {

/// Bernoulli-type measure on cylinders: the digit at position i is drawn from
/// row b_i of the matrix, independently across positions. All values are
/// handled as logarithms.
class CylinderMeasure {
 public:
  /// Throws InvalidMatrix if some base of the pattern has no row.
  CylinderMeasure(FrequencyMatrix matrix, BasePattern bases);

  const FrequencyMatrix& matrix() const noexcept { return matrix_; }
  const BasePattern& bases() const noexcept { return bases_; }

  /// log p_{b_i, digit}; -inf when the probability is zero.
  double log_probability(std::size_t position, std::uint32_t digit) const;

 private:
  FrequencyMatrix matrix_;
  BasePattern bases_;
  std::map<std::uint32_t, std::vector<double>> log_rows_;
};

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

inline bool is_zero_measure(double log_mu) noexcept { return log_mu == kMinusInfinity; }

/// sum_i log p_{b_i, eps_i}; kMinusInfinity for zero-measure cylinders.
/// Throws InvalidMatrix if the string's bases differ from the measure's.
double log_mu_cylinder(const CylinderMeasure& m, const DigitString& s);

/// Draws eps_1..eps_n independently, eps_i from row b_i, using Rng(seed).
DigitString sample_digits(const CylinderMeasure& m, std::size_t n, std::uint64_t seed);

struct DimensionTrace {
  std::vector<std::size_t> depths;
  std::vector<double> log_mu;
  std::vector<double> log_len;  // -sum_{i<=n} log b_i
  std::vector<double> ratio;    // log_mu / log_len
};

/// log mu and log length of the cylinders along s at the requested depths
/// (ascending, 1 <= depth <= s.depth()). Throws ZeroMeasurePrefix if a
/// requested prefix has zero measure.
DimensionTrace pointwise_dimension_trace(const CylinderMeasure& m, const DigitString& s,
                                         std::span<const std::size_t> depths);

}  // namespace cantordim
