#include "cantordim/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "cantordim/numeric.hpp"
#include "cantordim/rng.hpp"

namespace cantordim {

std::string_view to_string(SolverMethod method) noexcept {
  switch (method) {
    case SolverMethod::ipf:
      return "ipf";
    case SolverMethod::mirror_descent:
      return "mirror_descent";
  }
  return "unknown";
}

SolverMethod solver_method_from_string(std::string_view name) {
  if (name == "ipf") return SolverMethod::ipf;
  if (name == "mirror_descent") return SolverMethod::mirror_descent;
  throw ParseError("unknown solver method '" + std::string(name) + "'");
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ParseError("solver tol must be positive");
  if (cfg.max_iter == 0) throw ParseError("solver max_iter must be at least 1");
}

NotConverged::NotConverged(SolverResult result)
    : Error(std::string(to_string(result.method)) + " did not converge after " +
            std::to_string(result.iterations) + " iterations (row residual " +
            std::to_string(result.row_residual) + ", column residual " +
            std::to_string(result.column_residual) + ")"),
      result_(std::move(result)) {}

CounterexampleFound::CounterexampleFound(FrequencyMatrix p, double gap)
    : Error("sampled member of pi(alpha) exceeds the closed-form dimension by " +
            std::to_string(gap)),
      matrix_(std::move(p)),
      gap_(gap) {}

namespace {

// Support lattice of the variational problem.
struct Lattice {
  std::vector<std::uint32_t> bases;       // rows with d_n > 0
  std::vector<double> weight;             // d_n
  std::vector<std::vector<std::size_t>> cols;  // active digits per row
  std::vector<std::size_t> digits;        // all active digits, ascending
  std::vector<double> target;             // alpha per active digit
  std::map<std::size_t, std::size_t> slot;  // digit -> index into `digits`
};

Lattice build_lattice(const StochasticVector& alpha, const StochasticVector& d) {
  Lattice lat;
  const std::size_t j0 = alpha.support_min();
  for (const auto& [j, aj] : alpha.entries()) {
    lat.slot[j] = lat.digits.size();
    lat.digits.push_back(j);
    lat.target.push_back(aj);
  }
  for (const auto& [n, dn] : d.entries()) {
    lat.bases.push_back(static_cast<std::uint32_t>(n));
    lat.weight.push_back(dn);
    std::vector<std::size_t> cols;
    for (const auto j : lat.digits) {
      if (j >= j0 && j < n) cols.push_back(j);
    }
    lat.cols.push_back(std::move(cols));
  }
  return lat;
}

using Work = std::vector<std::vector<double>>;

Work to_work(const FrequencyMatrix& p, const Lattice& lat) {
  Work w;
  for (const auto n : lat.bases) w.push_back(p.row(n));
  return w;
}

FrequencyMatrix to_matrix(const Work& w, const Lattice& lat) {
  FrequencyMatrix::Rows rows;
  for (std::size_t i = 0; i < lat.bases.size(); ++i) rows.emplace(lat.bases[i], w[i]);
  return FrequencyMatrix(std::move(rows), 1e-9);
}

std::vector<double> weighted_columns(const Work& w, const Lattice& lat) {
  std::vector<CompensatedSum> sums(lat.digits.size());
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    for (const auto j : lat.cols[i]) sums[lat.slot.at(j)] += lat.weight[i] * w[i][j];
  }
  std::vector<double> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

void scale_columns(Work& w, const Lattice& lat) {
  const auto columns = weighted_columns(w, lat);
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    for (const auto j : lat.cols[i]) {
      const auto s = lat.slot.at(j);
      if (columns[s] > 0.0) w[i][j] *= lat.target[s] / columns[s];
    }
  }
}

void normalize_rows(Work& w, const Lattice& lat) {
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    CompensatedSum sum;
    for (const auto j : lat.cols[i]) sum += w[i][j];
    const double total = sum.value();
    if (total > 0.0) {
      for (const auto j : lat.cols[i]) w[i][j] /= total;
    }
  }
}

struct Residuals {
  double row = 0.0;
  double column = 0.0;
};

Residuals residuals(const Work& w, const Lattice& lat) {
  Residuals r;
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    CompensatedSum sum;
    for (const double x : w[i]) sum += x;
    r.row = std::max(r.row, std::abs(sum.value() - 1.0));
  }
  const auto columns = weighted_columns(w, lat);
  for (std::size_t s = 0; s < columns.size(); ++s) {
    r.column = std::max(r.column, std::abs(columns[s] - lat.target[s]));
  }
  return r;
}

double objective(const Work& w, const Lattice& lat) {
  CompensatedSum entropy;
  CompensatedSum denominator;
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    for (const double x : w[i]) entropy += -lat.weight[i] * xlogx(x);
    denominator += lat.weight[i] * std::log(static_cast<double>(lat.bases[i]));
  }
  return entropy.value() / denominator.value();
}

Work uniform_start(const Lattice& lat) {
  Work w;
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    std::vector<double> row(lat.bases[i], 0.0);
    const double share = 1.0 / static_cast<double>(lat.cols[i].size());
    for (const auto j : lat.cols[i]) row[j] = share;
    w.push_back(std::move(row));
  }
  return w;
}

// Records one iteration and reports whether the stopping rule holds.
bool record(SolverResult& result, const Work& w, const Lattice& lat, double previous,
            const SolverConfig& cfg) {
  const auto res = residuals(w, lat);
  result.row_residual = res.row;
  result.column_residual = res.column;
  result.objective = objective(w, lat);
  result.residual_history.push_back(std::max(res.row, res.column));
  result.objective_history.push_back(result.objective);
  const double delta = std::abs(result.objective - previous);
  return std::max({res.row, res.column, delta}) <= cfg.tol;
}

SolverResult run_ipf(const Lattice& lat, const SolverConfig& cfg) {
  SolverResult result;
  result.method = SolverMethod::ipf;
  Work w = uniform_start(lat);
  double previous = objective(w, lat);
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    scale_columns(w, lat);
    normalize_rows(w, lat);
    result.iterations = it;
    const bool done = record(result, w, lat, previous, cfg);
    previous = result.objective;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.matrix = to_matrix(w, lat);
  return result;
}

// Rows as the softmax of the multipliers over each row's active digits.
void rows_from_multipliers(Work& w, const Lattice& lat, const std::vector<double>& lambda) {
  for (std::size_t i = 0; i < lat.bases.size(); ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto j : lat.cols[i]) top = std::max(top, lambda[lat.slot.at(j)]);
    CompensatedSum sum;
    for (const auto j : lat.cols[i]) {
      w[i][j] = std::exp(lambda[lat.slot.at(j)] - top);
      sum += w[i][j];
    }
    const double total = sum.value();
    for (const auto j : lat.cols[i]) w[i][j] /= total;
  }
}

// Each row covariance diag(p) - p p^T is bounded by I/2 (Boehning), and the
// weights d_n sum to 1, so the dual gradient is 1/2-Lipschitz.
constexpr double kDualStep = 2.0;

SolverResult run_mirror_descent(const Lattice& lat, const SolverConfig& cfg) {
  SolverResult result;
  result.method = SolverMethod::mirror_descent;
  std::vector<double> lambda(lat.digits.size(), 0.0);
  Work w = uniform_start(lat);
  rows_from_multipliers(w, lat, lambda);
  double previous = objective(w, lat);

  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    // Gradient of the dual sum_n d_n logsumexp_n(lambda) - sum_j alpha_j lambda_j.
    const auto columns = weighted_columns(w, lat);
    for (std::size_t s = 0; s < lambda.size(); ++s) {
      lambda[s] -= kDualStep * (columns[s] - lat.target[s]);
    }

    rows_from_multipliers(w, lat, lambda);
    result.iterations = it;
    const bool done = record(result, w, lat, previous, cfg);
    previous = result.objective;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.matrix = to_matrix(w, lat);
  return result;
}

}  // namespace

SolverResult solve_variational(const StochasticVector& alpha, const StochasticVector& d,
                               const SolverConfig& cfg) {
  validate(cfg);
  auto feasibility = check_feasibility(alpha, d);
  if (!feasibility.feasible) throw Infeasible(std::move(feasibility));

  const Lattice lat = build_lattice(alpha, d);
  SolverResult result = cfg.method == SolverMethod::ipf ? run_ipf(lat, cfg)
                                                        : run_mirror_descent(lat, cfg);
  if (!result.converged) throw NotConverged(std::move(result));
  return result;
}

FrequencyMatrix ipf_sweep(const FrequencyMatrix& p, const StochasticVector& d,
                          const StochasticVector& alpha) {
  const Lattice lat = build_lattice(alpha, d);
  Work w = to_work(p, lat);
  scale_columns(w, lat);
  normalize_rows(w, lat);
  return to_matrix(w, lat);
}

std::vector<FrequencyMatrix> sample_pi_alpha(const StochasticVector& alpha,
                                             const StochasticVector& d, std::size_t count,
                                             std::uint64_t seed, double step_scale) {
  const FrequencyMatrix base = optimal_matrix(lemma_recursion(alpha, d));
  const Lattice lat = build_lattice(alpha, d);

  struct Move {
    std::size_t row1, row2;
    std::size_t j1, j2;
  };
  std::vector<Move> moves;
  for (std::size_t a = 0; a < lat.bases.size(); ++a) {
    for (std::size_t b = a + 1; b < lat.bases.size(); ++b) {
      // Digits active in both rows are those active in the shorter row a.
      const auto& shared = lat.cols[a];
      for (std::size_t x = 0; x < shared.size(); ++x) {
        for (std::size_t y = x + 1; y < shared.size(); ++y) {
          moves.push_back({a, b, shared[x], shared[y]});
        }
      }
    }
  }

  std::vector<FrequencyMatrix> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    if (moves.empty() || step_scale == 0.0) {
      out.push_back(base);
      continue;
    }
    Rng rng(derive_seed(seed, s));
    Work w = to_work(base, lat);
    const std::size_t steps = 1 + rng.below(2 * moves.size());
    for (std::size_t k = 0; k < steps; ++k) {
      const Move& m = moves[rng.below(moves.size())];
      auto& r1 = w[m.row1];
      auto& r2 = w[m.row2];
      const double d1 = lat.weight[m.row1];
      const double d2 = lat.weight[m.row2];
      // e > 0 lowers (row1, j2) and (row2, j1); e < 0 lowers the other pair.
      const double up = std::min(r1[m.j2] * d1, r2[m.j1] * d2);
      const double down = std::min(r1[m.j1] * d1, r2[m.j2] * d2);
      if (up <= 0.0 && down <= 0.0) continue;
      const double u = 2.0 * rng.uniform() - 1.0;
      const double e = step_scale * (u >= 0.0 ? u * up : u * down);
      r1[m.j1] = std::max(0.0, r1[m.j1] + e / d1);
      r1[m.j2] = std::max(0.0, r1[m.j2] - e / d1);
      r2[m.j1] = std::max(0.0, r2[m.j1] - e / d2);
      r2[m.j2] = std::max(0.0, r2[m.j2] + e / d2);
    }
    FrequencyMatrix::Rows rows = base.rows();
    for (std::size_t i = 0; i < lat.bases.size(); ++i) rows[lat.bases[i]] = w[i];
    out.emplace_back(std::move(rows), 1e-10);
  }
  return out;
}

KiferReport verify_kifer(const StochasticVector& alpha, const StochasticVector& d,
                         std::size_t count, std::uint64_t seed, const SolverConfig& base) {
  KiferReport report;
  report.closed_form = dim_closed_form(alpha, d).dimension;
  report.passed = true;

  for (const auto method : {SolverMethod::ipf, SolverMethod::mirror_descent}) {
    SolverConfig cfg = base;
    cfg.method = method;
    SolverResult result;
    try {
      result = solve_variational(alpha, d, cfg);
    } catch (const NotConverged& e) {
      result = e.result();
    }
    MethodOutcome outcome;
    outcome.method = method;
    outcome.objective = result.objective;
    outcome.gap = std::abs(result.objective - report.closed_form);
    outcome.iterations = result.iterations;
    outcome.row_residual = result.row_residual;
    outcome.column_residual = result.column_residual;
    outcome.converged = result.converged;
    outcome.residual_history = std::move(result.residual_history);
    if (!outcome.converged || outcome.gap > kSolverGapTolerance) report.passed = false;
    report.methods.push_back(std::move(outcome));
  }

  report.max_sampled = -std::numeric_limits<double>::infinity();
  report.max_sample_excess = -std::numeric_limits<double>::infinity();
  for (auto& p : sample_pi_alpha(alpha, d, count, seed)) {
    const double value = dim_peyriere(p, d);
    const double excess = value - report.closed_form;
    report.max_sampled = std::max(report.max_sampled, value);
    report.max_sample_excess = std::max(report.max_sample_excess, excess);
    if (excess > kSampleExcessTolerance) throw CounterexampleFound(std::move(p), excess);
  }
  report.samples = count;
  return report;
}

}  // namespace cantordim
