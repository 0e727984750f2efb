// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails (including its runtime budget).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cantordim/closed_form.hpp"
#include "cantordim/expansion.hpp"
#include "cantordim/measure_sampler.hpp"
#include "cantordim/variational.hpp"
#include "support/random_instances.hpp"

using namespace cantordim;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;  // 0 means no runtime limit
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

StochasticVector exact(std::initializer_list<std::pair<const std::size_t, Rational>> entries) {
  return StochasticVector::from_exact(StochasticVector::ExactEntries(entries));
}

const std::vector<testing::RandomInstance>& constraint_instances() {
  static const auto instances = testing::random_feasible_instances(200, 10, 0.05, 20240101);
  return instances;
}

Outcome ac1_constraints() {
  double worst_row = 0.0;
  double worst_col = 0.0;
  double worst_al = 0.0;
  for (const auto& inst : constraint_instances()) {
    const auto table = lemma_recursion(inst.alpha, inst.d);
    const auto p = optimal_matrix(table);
    for (auto n = static_cast<std::uint32_t>(std::max<std::size_t>(2, table.j0 + 1)); n <= table.L; ++n) {
      double row = 0.0;
      for (std::size_t j = table.j0; j < n; ++j) row += p.at(n, j);
      worst_row = std::max(worst_row, std::abs(row - 1.0));
    }
    for (std::size_t j = table.j0; j < table.L; ++j) {
      double col = 0.0;
      for (std::size_t k = j + 1; k <= table.L; ++k) col += inst.d[k] * p.at(static_cast<std::uint32_t>(k), j);
      worst_col = std::max(worst_col, std::abs(col - inst.alpha[j]));
    }
    worst_al = std::max(worst_al, std::abs(table.A.at(table.L) - inst.d[table.L]));
  }
  const bool ok = worst_row <= 1e-12 && worst_col <= 1e-12 && worst_al <= 1e-12;
  return {ok, fmt("200 instances; max row err %.2e, max column err %.2e, max |A_L - d_L| %.2e",
                  worst_row, worst_col, worst_al)};
}

Outcome ac2_formula_bridge() {
  double worst = 0.0;
  for (const auto& inst : constraint_instances()) {
    const auto report = dim_closed_form(inst.alpha, inst.d);
    worst = std::max(worst, std::abs(report.dimension - dim_peyriere(report.optimal_matrix, inst.d)));
  }
  return {worst <= 1e-10, fmt("200 instances; max |closed form - entropy formula| %.2e", worst)};
}

Outcome ac3_variational() {
  const auto instances = testing::random_feasible_instances(50, 8, 0.05, 777);
  double worst_gap = 0.0;
  double worst_excess = -1.0;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    try {
      const auto report = verify_kifer(instances[i].alpha, instances[i].d, 500, derive_seed(777, i));
      for (const auto& m : report.methods) {
        if (!m.converged) ++failures;
        worst_gap = std::max(worst_gap, m.gap);
      }
      worst_excess = std::max(worst_excess, report.max_sample_excess);
      if (!report.passed) ++failures;
    } catch (const CounterexampleFound& e) {
      ++failures;
      worst_excess = std::max(worst_excess, e.gap());
    }
  }
  const bool ok = failures == 0 && worst_gap <= 1e-6 && worst_excess <= 1e-9;
  return {ok, fmt("50 instances x 500 samples; %g failures, max solver gap %.2e, max sample excess %.2e",
                  static_cast<double>(failures), worst_gap, worst_excess)};
}

Outcome ac4_worked_instance() {
  const auto d = exact({{2, Rational(1, 2)}, {3, Rational(1, 2)}});
  const auto a = exact({{0, Rational(1, 2)}, {1, Rational(1, 3)}, {2, Rational(1, 6)}});
  const auto report = dim_closed_form(a, d);
  const auto& p = report.optimal_matrix;
  const auto& t = report.recursion;
  double err = 0.0;
  const auto track = [&err](double got, double want) { err = std::max(err, std::abs(got - want)); };
  track(p.at(2, 0), 3.0 / 5.0);
  track(p.at(2, 1), 2.0 / 5.0);
  track(p.at(3, 0), 2.0 / 5.0);
  track(p.at(3, 1), 4.0 / 15.0);
  track(p.at(3, 2), 1.0 / 3.0);
  track(t.r.at(2), 6.0 / 5.0);
  track(t.r.at(3), 4.0 / 5.0);
  track(t.t.at(0), 1.0 / 2.0);
  track(t.t.at(1), 1.0 / 3.0);
  track(t.t.at(2), 5.0 / 12.0);
  const double dim_err = std::abs(report.dimension - 0.98127);
  return {err <= 1e-12 && dim_err <= 5e-5,
          fmt("dimension %.15g (|diff from 0.98127| %.1e); max entry error %.1e", report.dimension,
              dim_err, err)};
}

Outcome ac5_classical_limits() {
  double uniform_err = 0.0;
  double point_err = 0.0;
  for (std::uint32_t b = 2; b <= 12; ++b) {
    StochasticVector::ExactEntries flat;
    for (std::uint32_t j = 0; j < b; ++j) flat.emplace(j, Rational(1, b));
    const auto d = exact({{b, Rational(1)}});
    uniform_err = std::max(uniform_err, std::abs(dim_closed_form(StochasticVector::from_exact(flat), d).dimension - 1.0));
    for (std::uint32_t j = 0; j < b; ++j) {
      point_err = std::max(point_err, std::abs(dim_closed_form(exact({{j, Rational(1)}}), d).dimension));
    }
  }
  const auto half = exact({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  const double target = std::log(2.0) / std::log(3.0);
  const double egg_err = std::abs(dim_eggleston(half, 3) - target);
  const double cf_err = std::abs(dim_closed_form(half, exact({{3, Rational(1)}})).dimension - target);
  const bool ok = uniform_err <= 1e-12 && point_err <= 1e-12 && egg_err <= 1e-12 && cf_err <= 1e-12;
  return {ok, fmt("uniform err %.1e, point-mass err %.1e, log2/log3 err %.1e", uniform_err, point_err,
                  std::max(egg_err, cf_err))};
}

Outcome ac6_infeasibility() {
  const auto d = base_frequencies_from_pattern(BasePattern({2, 2, 3}));
  std::size_t rejected = 0;
  std::size_t tried = 0;
  for (const double a2 : {0.3334, 0.34, 0.4, 0.5, 0.7, 0.9}) {
    ++tried;
    const auto a = validate_stochastic({{0, (1.0 - a2) / 2.0}, {1, (1.0 - a2) / 2.0}, {2, a2}});
    const auto report = check_feasibility(a, d);
    bool thrown = false;
    try {
      dim_closed_form(a, d);
    } catch (const Infeasible& e) {
      thrown = e.report().violated_level == std::optional<std::size_t>(3);
    }
    if (!report.feasible && report.violated_level == std::optional<std::size_t>(3) && thrown) ++rejected;
  }
  return {rejected == tried,
          fmt("%g of %g alpha_2 values in (1/3, 1) rejected at level 3", static_cast<double>(rejected),
              static_cast<double>(tried))};
}

Outcome ac7_monte_carlo() {
  const auto d = exact({{2, Rational(1, 2)}, {3, Rational(1, 2)}});
  const auto a = exact({{0, Rational(1, 2)}, {1, Rational(1, 3)}, {2, Rational(1, 6)}});
  const auto report = dim_closed_form(a, d);
  const CylinderMeasure m(report.optimal_matrix, BasePattern({2, 3}));
  const std::size_t n = 100'000;
  const auto s = sample_digits(m, n, 7);
  const auto stats = digit_stats(s);
  double worst_sigma = 0.0;
  for (const auto& [j, aj] : a.entries()) {
    const double freq = static_cast<double>(stats.digit_count(static_cast<std::uint32_t>(j))) / n;
    worst_sigma = std::max(worst_sigma, std::abs(freq - aj) / std::sqrt(aj * (1.0 - aj) / n));
  }
  const std::vector<std::size_t> depths = {n};
  const double ratio = pointwise_dimension_trace(m, s, depths).ratio.back();
  const double gap = std::abs(ratio - report.dimension);
  return {worst_sigma <= 4.0 && gap <= 0.01,
          fmt("seed 7, n = 1e5; max frequency deviation %.2f sigma, ratio %.6f (|diff| %.1e)", worst_sigma,
              ratio, gap)};
}

Outcome ac8_expansion() {
  const BasePattern a({2, 3});
  const long grid = 10'000;
  std::size_t bad_round_trip = 0;
  for (long i = 0; i < grid; ++i) {
    const BigRational x(i, grid);
    const auto s = expand(x, a, 64);
    // 0 <= x - value(prefix_n) < length(prefix_n) for every n <= 64, as
    // the integer inequality 0 <= i*D - grid*N < grid.
    BigInt numerator = 0;
    BigInt denominator = 1;
    for (std::size_t k = 0; k < 64; ++k) {
      numerator = numerator * a.base_at(k) + s.digits()[k];
      denominator *= a.base_at(k);
      const BigInt gap = BigInt(i) * denominator - BigInt(grid) * numerator;
      if (gap < 0 || gap >= grid) {
        ++bad_round_trip;
        break;
      }
    }
  }
  std::size_t bad_partition = 0;
  std::size_t parents = 0;
  for (long i = 0; i < grid; i += 97) {
    const auto s = expand(BigRational(i, grid), a, 63);
    for (std::size_t depth = 0; depth <= 63; depth += 9) {
      const auto parent = s.prefix(depth);
      const auto pc = cylinder(parent);
      BigRational cursor = *pc.exact_lower;
      bool ok = true;
      for (std::uint32_t e = 0; e < a.base_at(depth); ++e) {
        const auto cc = cylinder(parent.extended(e));
        ok = ok && *cc.exact_lower == cursor;
        cursor += *cc.exact_length;
      }
      ok = ok && cursor == *pc.exact_lower + *pc.exact_length;
      ++parents;
      if (!ok) ++bad_partition;
    }
  }
  return {bad_round_trip == 0 && bad_partition == 0,
          fmt("1e4 grid points x depths 1..64: %g round-trip failures; %g of %g parents mis-partitioned",
              static_cast<double>(bad_round_trip), static_cast<double>(bad_partition),
              static_cast<double>(parents))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "constraint suite", 1.0, ac1_constraints},
      {"AC2", "formula bridge", 1.0, ac2_formula_bridge},
      {"AC3", "variational certification", 60.0, ac3_variational},
      {"AC4", "worked instance", 0.0, ac4_worked_instance},
      {"AC5", "classical limits", 0.0, ac5_classical_limits},
      {"AC6", "infeasibility", 0.0, ac6_infeasibility},
      {"AC7", "Monte Carlo consistency", 5.0, ac7_monte_carlo},
      {"AC8", "expansion round trip", 2.0, ac8_expansion},
  };
  // Generate the shared instances outside the AC1 timer.
  constraint_instances();

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("unexpected error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_seconds == 0.0 || seconds < c.budget_seconds;
    const bool pass = out.ok && in_budget;
    if (!pass) ++failed;
    std::string timing = fmt("%.3f s", seconds);
    if (c.budget_seconds > 0.0) timing += fmt(" < %g s", c.budget_seconds);
    if (!in_budget) timing += " EXCEEDED";
    std::printf("[%s] %s %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str(),
                timing.c_str());
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
