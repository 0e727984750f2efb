#include "cantordim/measure_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cantordim/errors.hpp"
#include "cantordim/numeric.hpp"
#include "cantordim/rng.hpp"

namespace cantordim {

CylinderMeasure::CylinderMeasure(FrequencyMatrix matrix, BasePattern bases)
    : matrix_(std::move(matrix)), bases_(std::move(bases)) {
  for (const auto b : bases_.bases()) {
    if (log_rows_.contains(b)) continue;
    const auto& row = matrix_.row(b);
    std::vector<double> logs(row.size());
    std::transform(row.begin(), row.end(), logs.begin(),
                   [](double p) { return p > 0.0 ? std::log(p) : kMinusInfinity; });
    log_rows_.emplace(b, std::move(logs));
  }
}

double CylinderMeasure::log_probability(std::size_t position, std::uint32_t digit) const {
  const auto& logs = log_rows_.at(bases_.base_at(position));
  return digit < logs.size() ? logs[digit] : kMinusInfinity;
}

double log_mu_cylinder(const CylinderMeasure& m, const DigitString& s) {
  if (!(s.bases() == m.bases())) throw InvalidMatrix("digit string uses a different base pattern");
  CompensatedSum sum;
  for (std::size_t i = 0; i < s.depth(); ++i) {
    const double lp = m.log_probability(i, s.digits()[i]);
    if (is_zero_measure(lp)) return kMinusInfinity;
    sum += lp;
  }
  return sum.value();
}

DigitString sample_digits(const CylinderMeasure& m, std::size_t n, std::uint64_t seed) {
  // Cumulative rows, last entry forced to 1 so every draw lands somewhere.
  std::map<std::uint32_t, std::vector<double>> cdf;
  for (const auto b : m.bases().bases()) {
    if (cdf.contains(b)) continue;
    const auto& row = m.matrix().row(b);
    std::vector<double> c(row.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) c[j] = (acc += row[j]);
    // Trailing zero-probability digits must stay unreachable.
    std::size_t last = row.size();
    while (last > 0 && row[last - 1] == 0.0) --last;
    for (std::size_t j = last - 1; j < row.size(); ++j) c[j] = 1.0;
    cdf.emplace(b, std::move(c));
  }

  Rng rng(seed);
  std::vector<std::uint32_t> digits;
  digits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = cdf.at(m.bases().base_at(i));
    const double u = rng.uniform();
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    digits.push_back(static_cast<std::uint32_t>(it - c.begin()));
  }
  return DigitString(std::move(digits), m.bases());
}

DimensionTrace pointwise_dimension_trace(const CylinderMeasure& m, const DigitString& s,
                                         std::span<const std::size_t> depths) {
  if (!(s.bases() == m.bases())) throw InvalidMatrix("digit string uses a different base pattern");
  DimensionTrace trace;
  CompensatedSum log_mu;
  CompensatedSum log_len;
  bool zero = false;
  std::size_t position = 0;
  for (const auto depth : depths) {
    if (depth == 0 || depth > s.depth() || depth < position) {
      throw ParseError("trace depth " + std::to_string(depth) + " is not in 1.." +
                       std::to_string(s.depth()) + " or not ascending");
    }
    for (; position < depth; ++position) {
      const double lp = m.log_probability(position, s.digits()[position]);
      if (is_zero_measure(lp)) zero = true;
      log_mu += lp;
      log_len += -std::log(static_cast<double>(s.base_at(position)));
    }
    if (zero) throw ZeroMeasurePrefix(depth);
    trace.depths.push_back(depth);
    trace.log_mu.push_back(log_mu.value());
    trace.log_len.push_back(log_len.value());
    const double ratio = log_mu.value() / log_len.value();
    trace.ratio.push_back(ratio == 0.0 ? 0.0 : ratio);
  }
  return trace;
}

}  // namespace cantordim
