#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cantordim/rational.hpp"

namespace cantordim {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr std::int64_t kDefaultMaxPeriod = 1'000'000;

/// Finitely supported probability vector over nonnegative indices.
///
/// Holds both digit frequencies (alpha_j, indexed by digit) and base
/// frequencies (d_n, indexed by base value). Zero entries are not stored;
/// an absent index means exactly zero. When the vector was built from exact
/// rationals, the exact form is kept alongside the doubles.
class StochasticVector {
 public:
  using Entries = std::map<std::size_t, double>;
  using ExactEntries = std::map<std::size_t, Rational>;

  /// Checks nonnegativity and that the sum is within `tol` of 1. Never
  /// renormalizes.
  static StochasticVector validate(const Entries& raw, double tol = kSumTolerance);

  /// Builds from exact rationals; the sum must be exactly 1.
  static StochasticVector from_exact(const ExactEntries& raw);

  double operator[](std::size_t index) const noexcept;
  const Entries& entries() const noexcept { return entries_; }
  const std::optional<ExactEntries>& exact() const noexcept { return exact_; }

  /// Largest index carrying positive mass (L for base frequencies).
  std::size_t support_max() const noexcept { return entries_.rbegin()->first; }
  /// Smallest index carrying positive mass (j0 for digit frequencies).
  std::size_t support_min() const noexcept { return entries_.begin()->first; }

  /// Dense copy of indices 0..size-1.
  std::vector<double> dense(std::size_t size) const;

  friend bool operator==(const StochasticVector& a, const StochasticVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  StochasticVector() = default;
  Entries entries_;
  std::optional<ExactEntries> exact_;
};

StochasticVector validate_stochastic(const StochasticVector::Entries& raw,
                                     double tol = kSumTolerance);

/// One period of a periodic base sequence A = (b_1, b_2, ...). Copies share
/// the underlying storage.
class BasePattern {
 public:
  explicit BasePattern(std::vector<std::uint32_t> bases);

  /// b_{position+1}; positions are zero-based.
  std::uint32_t base_at(std::size_t position) const noexcept {
    return (*bases_)[position % bases_->size()];
  }
  std::size_t period() const noexcept { return bases_->size(); }
  std::span<const std::uint32_t> bases() const noexcept { return *bases_; }

  /// D_k(n): number of positions among the first n with base k.
  std::map<std::uint32_t, std::uint64_t> base_counts(std::uint64_t n) const;

  /// d_k = count_k / period, exact.
  std::map<std::uint32_t, Rational> exact_frequencies() const;

  friend bool operator==(const BasePattern& a, const BasePattern& b) {
    return *a.bases_ == *b.bases_;
  }

 private:
  std::shared_ptr<const std::vector<std::uint32_t>> bases_;
};

StochasticVector base_frequencies_from_pattern(const BasePattern& pattern);

/// Realizes rational base frequencies as one period of length Q (the common
/// denominator). Positions are filled greedily with the base whose running
/// count lags its target n*d_k the most, ties to the smaller base, so
/// |D_k(n) - n d_k| stays below the number of distinct bases.
///
/// Inexact doubles are accepted when they are within 1e-12 of a rational
/// with denominator <= max_period.
BasePattern pattern_from_frequencies(const StochasticVector& d,
                                     std::int64_t max_period = kDefaultMaxPeriod);

/// Row-stochastic matrix P = (p_{n,j}) keyed by base value n >= 2, with
/// p_{n,j} defined only for digits j < n.
class FrequencyMatrix {
 public:
  using Rows = std::map<std::uint32_t, std::vector<double>>;

  FrequencyMatrix() = default;
  /// Throws InvalidMatrix unless every row has n nonnegative entries summing
  /// to 1 within `tol`.
  explicit FrequencyMatrix(Rows rows, double tol = kSumTolerance);

  bool has_row(std::uint32_t n) const noexcept { return rows_.contains(n); }
  const std::vector<double>& row(std::uint32_t n) const;
  const Rows& rows() const noexcept { return rows_; }

  /// p_{n,j}; zero for absent rows and for j >= n.
  double at(std::uint32_t n, std::size_t j) const noexcept;

  friend bool operator==(const FrequencyMatrix&, const FrequencyMatrix&) = default;

 private:
  Rows rows_;
};

}  // namespace cantordim
