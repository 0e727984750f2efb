#include "cantordim/core_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cantordim/errors.hpp"
#include "cantordim/numeric.hpp"

namespace cantordim {

StochasticVector StochasticVector::validate(const Entries& raw, double tol) {
  StochasticVector v;
  CompensatedSum sum;
  for (const auto& [index, value] : raw) {
    if (!(value >= 0.0)) throw NegativeEntry(index);
    sum += value;
    if (value > 0.0) v.entries_.emplace(index, value);
  }
  if (v.entries_.empty()) throw EmptySupport();
  if (std::abs(sum.value() - 1.0) > tol) throw SumNotOne(sum.value());
  return v;
}

StochasticVector StochasticVector::from_exact(const ExactEntries& raw) {
  StochasticVector v;
  ExactEntries exact;
  Rational sum = 0;
  for (const auto& [index, value] : raw) {
    if (value.numerator() < 0) throw NegativeEntry(index);
    if (value.numerator() == 0) continue;
    sum += value;
    exact.emplace(index, value);
    v.entries_.emplace(index, to_double(value));
  }
  if (v.entries_.empty()) throw EmptySupport();
  if (sum != Rational(1)) throw SumNotOne(to_double(sum));
  v.exact_ = std::move(exact);
  return v;
}

double StochasticVector::operator[](std::size_t index) const noexcept {
  const auto it = entries_.find(index);
  return it == entries_.end() ? 0.0 : it->second;
}

std::vector<double> StochasticVector::dense(std::size_t size) const {
  std::vector<double> out(size, 0.0);
  for (const auto& [index, value] : entries_) {
    if (index < size) out[index] = value;
  }
  return out;
}

StochasticVector validate_stochastic(const StochasticVector::Entries& raw, double tol) {
  return StochasticVector::validate(raw, tol);
}

BasePattern::BasePattern(std::vector<std::uint32_t> bases) {
  if (bases.empty()) throw InvalidBase(0);
  for (const auto b : bases) {
    if (b < 2) throw InvalidBase(b);
  }
  bases_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(bases));
}

std::map<std::uint32_t, std::uint64_t> BasePattern::base_counts(std::uint64_t n) const {
  std::map<std::uint32_t, std::uint64_t> counts;
  const std::uint64_t full = n / period();
  const std::uint64_t partial = n % period();
  for (std::size_t i = 0; i < period(); ++i) {
    const std::uint64_t c = full + (i < partial ? 1 : 0);
    if (c > 0) counts[(*bases_)[i]] += c;
  }
  return counts;
}

std::map<std::uint32_t, Rational> BasePattern::exact_frequencies() const {
  std::map<std::uint32_t, std::int64_t> counts;
  for (const auto b : *bases_) ++counts[b];
  std::map<std::uint32_t, Rational> out;
  const auto period_len = static_cast<std::int64_t>(period());
  for (const auto& [b, c] : counts) out.emplace(b, Rational(c, period_len));
  return out;
}

StochasticVector base_frequencies_from_pattern(const BasePattern& pattern) {
  StochasticVector::ExactEntries exact;
  for (const auto& [b, f] : pattern.exact_frequencies()) exact.emplace(b, f);
  return StochasticVector::from_exact(exact);
}

BasePattern pattern_from_frequencies(const StochasticVector& d, std::int64_t max_period) {
  StochasticVector::ExactEntries exact;
  if (d.exact()) {
    exact = *d.exact();
  } else {
    for (const auto& [index, value] : d.entries()) {
      const auto r = recover_rational(value, max_period, 1e-12);
      if (!r) throw IrrationalFrequency(index);
      exact.emplace(index, *r);
    }
    Rational sum = 0;
    for (const auto& [index, value] : exact) sum += value;
    if (sum != Rational(1)) throw IrrationalFrequency(exact.rbegin()->first);
  }

  std::int64_t q = 1;
  for (const auto& [index, value] : exact) {
    if (index < 2) throw InvalidBase(static_cast<std::int64_t>(index));
    q = std::lcm(q, value.denominator());
    if (q > max_period) throw DenominatorTooLarge(q);
  }

  struct Slot {
    std::uint32_t base;
    std::int64_t target;  // Q * d_k
    std::int64_t placed = 0;
  };
  std::vector<Slot> slots;
  for (const auto& [index, value] : exact) {
    slots.push_back({static_cast<std::uint32_t>(index), value.numerator() * (q / value.denominator())});
  }

  std::vector<std::uint32_t> bases;
  bases.reserve(static_cast<std::size_t>(q));
  for (std::int64_t n = 1; n <= q; ++n) {
    // Deficit of base k after n positions, scaled by Q: n*target - Q*placed.
    Slot* best = nullptr;
    std::int64_t best_deficit = 0;
    for (auto& s : slots) {
      if (s.placed == s.target) continue;
      const std::int64_t deficit = n * s.target - q * s.placed;
      if (best == nullptr || deficit > best_deficit) {
        best = &s;
        best_deficit = deficit;
      }
    }
    ++best->placed;
    bases.push_back(best->base);
  }
  return BasePattern(std::move(bases));
}

FrequencyMatrix::FrequencyMatrix(Rows rows, double tol) : rows_(std::move(rows)) {
  for (const auto& [n, row] : rows_) {
    if (n < 2) throw InvalidMatrix("row index " + std::to_string(n) + " is not a base >= 2");
    if (row.size() != n) {
      throw InvalidMatrix("row " + std::to_string(n) + " has " + std::to_string(row.size()) +
                          " entries, expected " + std::to_string(n));
    }
    CompensatedSum sum;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!(row[j] >= 0.0)) {
        throw InvalidMatrix("negative entry at (" + std::to_string(n) + ", " + std::to_string(j) +
                            ")");
      }
      sum += row[j];
    }
    if (std::abs(sum.value() - 1.0) > tol) {
      throw InvalidMatrix("row " + std::to_string(n) + " sums to " + std::to_string(sum.value()));
    }
  }
}

const std::vector<double>& FrequencyMatrix::row(std::uint32_t n) const {
  const auto it = rows_.find(n);
  if (it == rows_.end()) throw InvalidMatrix("no row for base " + std::to_string(n));
  return it->second;
}

double FrequencyMatrix::at(std::uint32_t n, std::size_t j) const noexcept {
  const auto it = rows_.find(n);
  if (it == rows_.end() || j >= it->second.size()) return 0.0;
  return it->second[j];
}

}  // namespace cantordim
