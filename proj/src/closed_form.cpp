#include "cantordim/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cantordim/numeric.hpp"

namespace cantordim {

namespace {

std::string describe(const FeasibilityReport& report) {
  if (report.feasible) return "feasible";
  std::string msg = "infeasible frequency pair";
  if (report.violated_level) {
    msg += ": tail inequality fails at level " + std::to_string(*report.violated_level);
    const auto it = report.slack.find(*report.violated_level);
    if (it != report.slack.end()) msg += " (slack " + std::to_string(it->second) + ")";
  }
  return msg;
}

}  // namespace

double FeasibilityReport::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [level, s] : slack) m = std::min(m, s);
  return m;
}

Infeasible::Infeasible(FeasibilityReport report)
    : Error(describe(report)), report_(std::move(report)) {}

FeasibilityReport check_feasibility(const StochasticVector& alpha, const StochasticVector& d,
                                    double tol) {
  const std::size_t L = d.support_max();
  const std::size_t j0 = alpha.support_min();
  if (d.support_min() < 2) {
    throw SupportMismatch("base frequencies carry mass at index " +
                          std::to_string(d.support_min()) + " < 2");
  }
  if (alpha.support_max() >= L) {
    throw SupportMismatch("digit " + std::to_string(alpha.support_max()) +
                          " has positive frequency but the largest base is " + std::to_string(L));
  }

  FeasibilityReport report;
  report.feasible = true;

  // Every position must be able to produce a digit >= j0.
  CompensatedSum low_mass;
  for (const auto& [n, dn] : d.entries()) {
    if (n <= j0) low_mass += dn;
  }
  if (low_mass.value() > 0.0) {
    report.feasible = false;
    report.violated_level = j0 + 1;
    report.slack[j0 + 1] = -low_mass.value();
  }

  // Tails accumulated from the top so each level costs O(1).
  const auto d_dense = d.dense(L + 1);
  const auto a_dense = alpha.dense(L + 1);
  CompensatedSum d_tail;  // sum_{k>=m} d_k
  CompensatedSum a_tail;  // sum_{j>=m-1} alpha_j
  std::map<std::size_t, double> slack;
  for (std::size_t m = L; m > j0 + 1; --m) {
    d_tail += d_dense[m];
    a_tail += a_dense[m - 1];
    slack[m] = d_tail.value() - a_tail.value();
  }
  for (const auto& [m, s] : slack) {
    report.slack[m] = s;
    if (!(s > tol) && (!report.violated_level || m < *report.violated_level)) {
      report.feasible = false;
      report.violated_level = m;
    }
  }
  return report;
}

RecursionTable lemma_recursion(const StochasticVector& alpha, const StochasticVector& d) {
  auto feasibility = check_feasibility(alpha, d);
  if (!feasibility.feasible) throw Infeasible(std::move(feasibility));

  RecursionTable table;
  table.j0 = alpha.support_min();
  table.L = d.support_max();
  const std::size_t j0 = table.j0;
  const std::size_t L = table.L;
  const auto a = alpha.dense(L);
  const auto dd = d.dense(L + 1);  // d_1 = 0 since bases are >= 2

  // stage[j - j0] holds alpha_j^{(n)} for the current n.
  std::vector<double> stage(a.begin() + static_cast<std::ptrdiff_t>(j0), a.end());
  // log_prod[k - j0] = sum_{i=j0+1}^{k} log(1 - d_i/A_i); empty sum at k = j0.
  std::vector<double> log_prod(L - j0, 0.0);

  for (std::size_t n = j0 + 1; n <= L; ++n) {
    if (n > j0 + 1) {
      const std::size_t k = n - 1;
      const double factor = 1.0 - dd[k] / table.A.at(k);
      if (!(factor > kFeasibilityTolerance)) throw DegenerateLevel(k);
      for (std::size_t j = j0; j + 1 < n; ++j) stage[j - j0] *= factor;
      log_prod[k - j0] = log_prod[k - 1 - j0] + std::log(factor);
    }
    CompensatedSum sum;
    for (std::size_t j = j0; j < n; ++j) sum += stage[j - j0];
    table.A[n] = sum.value();
    for (std::size_t j = j0; j < L; ++j) table.alpha_stage[{n, j}] = stage[j - j0];
  }

  for (std::size_t n = j0 + 1; n <= L; ++n) {
    const double log_r = log_prod[n - 1 - j0] - std::log(table.A.at(n));
    table.log_r[n] = log_r;
    table.r[n] = std::exp(log_r);
  }
  for (std::size_t j = j0; j < L; ++j) {
    const double log_t = a[j] > 0.0 ? std::log(a[j]) - log_prod[j - j0]
                                    : -std::numeric_limits<double>::infinity();
    table.log_t[j] = log_t;
    table.t[j] = a[j] > 0.0 ? a[j] * std::exp(-log_prod[j - j0]) : 0.0;
  }
  return table;
}

FrequencyMatrix optimal_matrix(const RecursionTable& table) {
  FrequencyMatrix::Rows rows;
  for (std::size_t n = 2; n <= table.L; ++n) {
    std::vector<double> row(n, 0.0);
    if (n <= table.j0) {
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(n));
    } else {
      const double r = table.r.at(n);
      for (std::size_t j = table.j0; j < n; ++j) {
        const double t = table.t.at(j);
        double p = r * t;
        // Product underflow/overflow for very long recursions; fall back to logs.
        if (t > 0.0 && (p == 0.0 || !std::isfinite(p))) {
          p = std::exp(table.log_r.at(n) + table.log_t.at(j));
        }
        row[j] = p;
      }
    }
    rows.emplace(static_cast<std::uint32_t>(n), std::move(row));
  }
  return FrequencyMatrix(std::move(rows));
}

double lyapunov_denominator(const StochasticVector& d) {
  CompensatedSum sum;
  for (const auto& [n, dn] : d.entries()) sum += dn * std::log(static_cast<double>(n));
  return sum.value();
}

double weighted_entropy(const FrequencyMatrix& p, const StochasticVector& d) {
  CompensatedSum sum;
  for (const auto& [n, dn] : d.entries()) {
    const auto& row = p.row(static_cast<std::uint32_t>(n));
    for (const double x : row) sum += -dn * xlogx(x);
  }
  return sum.value();
}

double dim_peyriere(const FrequencyMatrix& p, const StochasticVector& d) {
  const double denominator = lyapunov_denominator(d);
  if (!(denominator > 0.0)) throw SupportMismatch("base frequencies have an empty denominator");
  return weighted_entropy(p, d) / denominator;
}

DimensionReport dim_closed_form(const StochasticVector& alpha, const StochasticVector& d) {
  DimensionReport report;
  report.recursion = lemma_recursion(alpha, d);
  report.optimal_matrix = optimal_matrix(report.recursion);

  CompensatedSum numerator;
  for (const auto& [j, aj] : alpha.entries()) numerator += aj * report.recursion.log_t.at(j);
  for (const auto& [n, dn] : d.entries()) numerator += dn * report.recursion.log_r.at(n);
  report.numerator_entropy = -numerator.value();
  report.denominator_lyapunov = lyapunov_denominator(d);
  report.dimension = report.numerator_entropy / report.denominator_lyapunov;
  return report;
}

double dim_eggleston(const StochasticVector& alpha, std::uint32_t b) {
  if (b < 2) throw InvalidBase(b);
  if (alpha.support_max() >= b) {
    throw SupportMismatch("digit " + std::to_string(alpha.support_max()) +
                          " cannot occur in base " + std::to_string(b));
  }
  CompensatedSum sum;
  for (const auto& [j, aj] : alpha.entries()) sum += -xlogx(aj);
  return sum.value() / std::log(static_cast<double>(b));
}

std::map<std::size_t, double> column_marginal(const FrequencyMatrix& p,
                                              const StochasticVector& d) {
  std::map<std::size_t, CompensatedSum> sums;
  for (const auto& [n, dn] : d.entries()) {
    const auto& row = p.row(static_cast<std::uint32_t>(n));
    for (std::size_t j = 0; j < row.size(); ++j) sums[j] += dn * row[j];
  }
  std::map<std::size_t, double> out;
  for (const auto& [j, s] : sums) out.emplace(j, s.value());
  return out;
}

bool in_pi_alpha(const FrequencyMatrix& p, const StochasticVector& d,
                 const StochasticVector& alpha, double tol) {
  for (const auto& [n, dn] : d.entries()) {
    if (!p.has_row(static_cast<std::uint32_t>(n))) return false;
  }
  for (const auto& [n, row] : p.rows()) {
    CompensatedSum sum;
    for (const double x : row) {
      if (x < 0.0) return false;
      sum += x;
    }
    if (std::abs(sum.value() - 1.0) > tol) return false;
  }
  const auto marginal = column_marginal(p, d);
  for (const auto& [j, m] : marginal) {
    if (std::abs(m - alpha[j]) > tol) return false;
  }
  for (const auto& [j, aj] : alpha.entries()) {
    if (!marginal.contains(j) && aj > tol) return false;
  }
  return true;
}

}  // namespace cantordim
