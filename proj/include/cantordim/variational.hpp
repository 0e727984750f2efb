#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cantordim/closed_form.hpp"
#include "cantordim/core_model.hpp"
#include "cantordim/errors.hpp"

namespace cantordim {

enum class SolverMethod { ipf, mirror_descent };

std::string_view to_string(SolverMethod method) noexcept;
/// Throws ParseError for unknown names.
SolverMethod solver_method_from_string(std::string_view name);

struct SolverConfig {
  SolverMethod method = SolverMethod::ipf;
  double tol = 1e-10;
  std::size_t max_iter = 100'000;
  std::uint64_t seed = 0;
};

/// Throws ParseError when tol <= 0 or max_iter == 0.
void validate(const SolverConfig& cfg);

struct SolverResult {
  SolverMethod method = SolverMethod::ipf;
  FrequencyMatrix matrix;
  double objective = 0.0;  // dimension of the matrix's level set
  std::size_t iterations = 0;
  double row_residual = 0.0;
  double column_residual = 0.0;
  bool converged = false;
  /// max(row, column residual) after each iteration.
  std::vector<double> residual_history;
  std::vector<double> objective_history;
};

class NotConverged : public Error {
 public:
  explicit NotConverged(SolverResult result);
  const SolverResult& result() const noexcept { return result_; }

 private:
  SolverResult result_;
};

/// Maximizes the weighted entropy -sum_n d_n sum_j p log p over matrices
/// with unit row sums and d-weighted column sums alpha, on the lattice
/// {(n, j) : d_n > 0, j0 <= j < n, alpha_j > 0}. Cells outside the lattice
/// are fixed at zero.
///
/// ipf alternates weighted-column scaling and row normalization starting
/// from uniform rows. mirror_descent works on the Lagrangian: a unit entropic
/// mirror step on each row sets the row to the softmax of the column
/// multipliers, then the multipliers take a fixed gradient step on the dual.
///
/// Throws Infeasible, or NotConverged carrying the last iterate.
SolverResult solve_variational(const StochasticVector& alpha, const StochasticVector& d,
                               const SolverConfig& cfg);

/// One ipf sweep (column scaling then row normalization) applied to p.
FrequencyMatrix ipf_sweep(const FrequencyMatrix& p, const StochasticVector& d,
                          const StochasticVector& alpha);

/// `count` members of pi(alpha) obtained from P^alpha by random moves that
/// leave row sums and weighted column sums unchanged. A move on rows n1 != n2
/// and digits j1 != j2 adds +e/d1 at (n1,j1), -e/d1 at (n1,j2), -e/d2 at
/// (n2,j1) and +e/d2 at (n2,j2); e is a random fraction (times `step_scale`)
/// of the largest step keeping entries nonnegative. Moves blocked by a zero
/// entry are skipped.
std::vector<FrequencyMatrix> sample_pi_alpha(const StochasticVector& alpha,
                                             const StochasticVector& d, std::size_t count,
                                             std::uint64_t seed, double step_scale = 1.0);

inline constexpr double kSampleExcessTolerance = 1e-9;
inline constexpr double kSolverGapTolerance = 1e-6;

struct MethodOutcome {
  SolverMethod method = SolverMethod::ipf;
  double objective = 0.0;
  double gap = 0.0;  // |objective - closed form|
  std::size_t iterations = 0;
  double row_residual = 0.0;
  double column_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Supremum check. The objective is strictly concave on pi(alpha), so a
/// converged interior stationary point is the global maximum; samples give
/// an independent lower-side probe.
struct KiferReport {
  double closed_form = 0.0;
  std::size_t samples = 0;
  double max_sampled = 0.0;
  double max_sample_excess = 0.0;  // max over samples of dim - closed_form
  std::vector<MethodOutcome> methods;
  bool passed = false;
};

class CounterexampleFound : public Error {
 public:
  CounterexampleFound(FrequencyMatrix p, double gap);
  const FrequencyMatrix& matrix() const noexcept { return matrix_; }
  double gap() const noexcept { return gap_; }

 private:
  FrequencyMatrix matrix_;
  double gap_;
};

/// Runs both solver methods (tolerances and caps from `base`) and `count`
/// samples of pi(alpha) against the closed form. Throws CounterexampleFound
/// if a sample exceeds the closed form by more than kSampleExcessTolerance.
KiferReport verify_kifer(const StochasticVector& alpha, const StochasticVector& d,
                         std::size_t count, std::uint64_t seed, const SolverConfig& base = {});

}  // namespace cantordim
