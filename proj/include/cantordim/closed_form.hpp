#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "cantordim/core_model.hpp"
#include "cantordim/errors.hpp"

namespace cantordim {

inline constexpr double kFeasibilityTolerance = 1e-12;

/// Tail-inequality check for a digit/base frequency pair.
///
/// Digits >= m-1 can only occur at positions whose base is >= m, so level m
/// has slack  sum_{k>=m} d_k - sum_{j>=m-1} alpha_j.  Levels run over
/// j0+1 < m <= L, where each slack equals A_{m-1} - d_{m-1}, the numerator of
/// the recursion factor 1 - d_{m-1}/A_{m-1}. Base mass at n <= j0 is reported
/// as a violation of level j0+1.
struct FeasibilityReport {
  bool feasible = false;
  std::optional<std::size_t> violated_level;
  std::map<std::size_t, double> slack;

  /// Smallest slack, +inf when there are no levels.
  double min_slack() const;
};

class Infeasible : public Error {
 public:
  explicit Infeasible(FeasibilityReport report);
  const FeasibilityReport& report() const noexcept { return report_; }

 private:
  FeasibilityReport report_;
};

/// Throws SupportMismatch when alpha has mass at an index >= L or d has mass
/// below 2.
FeasibilityReport check_feasibility(const StochasticVector& alpha, const StochasticVector& d,
                                    double tol = kFeasibilityTolerance);

/// Intermediate quantities of the inductive construction of the optimal
/// matrix: A_n and alpha_j^{(n)} for j0 < n <= L, r_n for j0 < n <= L and
/// t_j for j0 <= j <= L-1. Logs are kept next to r and t so the dimension
/// never depends on underflowing products; log_t is -inf where alpha_j = 0.
struct RecursionTable {
  std::size_t j0 = 0;
  std::size_t L = 0;
  std::map<std::size_t, double> A;
  std::map<std::pair<std::size_t, std::size_t>, double> alpha_stage;  // (n, j)
  std::map<std::size_t, double> r;
  std::map<std::size_t, double> t;
  std::map<std::size_t, double> log_r;
  std::map<std::size_t, double> log_t;

  friend bool operator==(const RecursionTable&, const RecursionTable&) = default;
};

/// Throws Infeasible or DegenerateLevel.
RecursionTable lemma_recursion(const StochasticVector& alpha, const StochasticVector& d);

/// P^alpha: p_{n,j} = r_n t_j for n > j0, j >= j0; zero for j < j0; rows
/// n <= j0 are uniform. Rows are produced for every base 2..L.
FrequencyMatrix optimal_matrix(const RecursionTable& table);

/// Result of the closed-form evaluation. `numerator_entropy` is the negated
/// sum  -(sum_j alpha_j log t_j + sum_i d_i log r_i)  so that
/// dimension = numerator_entropy / denominator_lyapunov lies in [0, 1].
struct DimensionReport {
  double dimension = 0.0;
  double numerator_entropy = 0.0;
  double denominator_lyapunov = 0.0;
  FrequencyMatrix optimal_matrix;
  RecursionTable recursion;

  friend bool operator==(const DimensionReport&, const DimensionReport&) = default;
};

DimensionReport dim_closed_form(const StochasticVector& alpha, const StochasticVector& d);

/// sum_n d_n log n.
double lyapunov_denominator(const StochasticVector& d);

/// -sum_n d_n sum_j p_{n,j} log p_{n,j}, with 0 log 0 = 0.
double weighted_entropy(const FrequencyMatrix& p, const StochasticVector& d);

/// Dimension of the joint-frequency level set of P: weighted entropy over
/// the Lyapunov denominator. Throws InvalidMatrix if P lacks a row for a
/// base in the support of d.
double dim_peyriere(const FrequencyMatrix& p, const StochasticVector& d);

/// Constant-base special case: -sum_j alpha_j log alpha_j / log b.
double dim_eggleston(const StochasticVector& alpha, std::uint32_t b);

/// sum_n d_n p_{n,j} for every digit j that any row can produce.
std::map<std::size_t, double> column_marginal(const FrequencyMatrix& p, const StochasticVector& d);

/// True when P has a row-stochastic row (within tol) for each base of d and
/// its d-weighted column marginal matches alpha within tol.
bool in_pi_alpha(const FrequencyMatrix& p, const StochasticVector& d,
                 const StochasticVector& alpha, double tol);

}  // namespace cantordim
