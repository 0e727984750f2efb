#include "cantordim/cli.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cantordim/closed_form.hpp"
#include "cantordim/errors.hpp"
#include "cantordim/expansion.hpp"
#include "cantordim/instance.hpp"
#include "cantordim/measure_sampler.hpp"
#include "cantordim/rng.hpp"
#include "cantordim/variational.hpp"

namespace cantordim {

namespace {

struct Options {
  std::string instance;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> x;
  std::optional<std::string> out;
};

std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string to_text(const BigRational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

int cmd_dim(const Instance& inst, std::ostream& out) {
  try {
    out << to_json(dim_closed_form(inst.alpha, inst.d)).dump(2) << '\n';
    return kExitOk;
  } catch (const Infeasible& e) {
    out << to_json(e.report()).dump(2) << '\n';
    return kExitInfeasible;
  } catch (const DegenerateLevel& e) {
    auto report = check_feasibility(inst.alpha, inst.d);
    report.feasible = false;
    report.violated_level = e.level() + 1;
    out << to_json(report).dump(2) << '\n';
    return kExitInfeasible;
  }
}

int cmd_verify(const Instance& inst, const Options& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto report = verify_kifer(inst.alpha, inst.d, opt.n.value_or(inst.samples),
                                     opt.seed.value_or(inst.seed), inst.solver);
    out << to_json(report).dump(2) << '\n';
    return report.passed ? kExitOk : kExitNotConverged;
  } catch (const Infeasible& e) {
    out << to_json(e.report()).dump(2) << '\n';
    return kExitInfeasible;
  } catch (const DegenerateLevel& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const CounterexampleFound& e) {
    err << "error: " << e.what() << '\n';
    out << nlohmann::json{{"counterexample", to_json(e.matrix())}, {"gap", e.gap()}}.dump(2)
        << '\n';
    return kExitNotConverged;
  }
}

void write_trace(std::ostream& os, const DimensionTrace& trace, const FrequencyStats& stats,
                 const Instance& inst, std::uint64_t seed, double closed_form) {
  os << "depth,log_mu,log_len,ratio\n";
  for (std::size_t i = 0; i < trace.depths.size(); ++i) {
    os << trace.depths[i] << ',' << fmt15(trace.log_mu[i]) << ',' << fmt15(trace.log_len[i])
       << ',' << fmt15(trace.ratio[i]) << '\n';
  }
  os << "# rng=" << kRngAlgorithm << " seed=" << seed << '\n';
  os << "# closed_form_dimension=" << fmt15(closed_form) << '\n';
  os << "# digit,empirical_frequency,alpha\n";
  std::size_t top = inst.alpha.support_max();
  if (!stats.tau.empty()) top = std::max<std::size_t>(top, stats.tau.rbegin()->first);
  for (std::size_t j = 0; j <= top; ++j) {
    const double freq =
        stats.n == 0 ? 0.0
                     : static_cast<double>(stats.digit_count(static_cast<std::uint32_t>(j))) /
                           static_cast<double>(stats.n);
    os << "# " << j << ',' << fmt15(freq) << ',' << fmt15(inst.alpha[j]) << '\n';
  }
}

int cmd_sample(const Instance& inst, const Options& opt, std::ostream& out, std::ostream& err) {
  if (!inst.pattern) throw MissingPattern();
  DimensionReport report;
  try {
    report = dim_closed_form(inst.alpha, inst.d);
  } catch (const Infeasible& e) {
    out << to_json(e.report()).dump(2) << '\n';
    return kExitInfeasible;
  } catch (const DegenerateLevel& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  }

  const std::size_t n = opt.n.value_or(100'000);
  const std::uint64_t seed = opt.seed.value_or(inst.seed);
  const CylinderMeasure measure(report.optimal_matrix, *inst.pattern);
  const DigitString digits = sample_digits(measure, n, seed);

  std::vector<std::size_t> depths;
  const std::size_t stride = std::max<std::size_t>(1, n / 1000);
  for (std::size_t depth = stride; depth <= n; depth += stride) depths.push_back(depth);
  if (!depths.empty() && depths.back() != n) depths.push_back(n);
  const auto trace = pointwise_dimension_trace(measure, digits, depths);
  const auto stats = digit_stats(digits);

  if (opt.out) {
    std::ofstream file(*opt.out);
    if (!file) throw ParseError("cannot write '" + *opt.out + "'");
    write_trace(file, trace, stats, inst, seed, report.dimension);
  } else {
    write_trace(out, trace, stats, inst, seed, report.dimension);
  }
  return kExitOk;
}

int cmd_expand(const Instance& inst, const Options& opt, std::ostream& out) {
  if (!opt.x) throw ParseError("--x: required for expand");
  const BigRational x = parse_big_rational(*opt.x);
  const BasePattern bases = inst.pattern ? *inst.pattern : pattern_from_frequencies(inst.d);
  const DigitString s = expand(x, bases, opt.n.value_or(16));
  const Cylinder c = cylinder(s);

  nlohmann::json bases_used = nlohmann::json::array();
  for (std::size_t i = 0; i < s.depth(); ++i) bases_used.push_back(s.base_at(i));
  nlohmann::json cyl = {{"lower_approx", round_significant(c.lower)},
                        {"log_length", round_significant(c.log_length)}};
  if (c.exact_lower) {
    cyl["lower"] = to_text(*c.exact_lower);
    cyl["upper"] = to_text(*c.exact_lower + *c.exact_length);
    cyl["length"] = to_text(*c.exact_length);
  }
  const nlohmann::json doc = {{"x", to_text(x)},
                              {"digits", s.digits()},
                              {"bases", bases_used},
                              {"stats", to_json(digit_stats(s))},
                              {"cylinder", cyl}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hausdorff dimension of digit-frequency sets of Cantor series expansions",
               "cantordim"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--instance", opt.instance, "instance JSON file")->required();
    cmd->add_option("--n", opt.n, "depth / sample count");
    cmd->add_option("--seed", opt.seed, "RNG seed (overrides the instance seed)");
    cmd->add_option("--x", opt.x, "point in [0,1) for expand, e.g. 5/6 or 0.25");
    cmd->add_option("--out", opt.out, "output file (sample)");
  };
  auto* dim = app.add_subcommand("dim", "closed-form dimension and optimal matrix");
  auto* verify = app.add_subcommand("verify", "numerical check of the variational supremum");
  auto* sample = app.add_subcommand("sample", "Monte Carlo pointwise-dimension trace (CSV)");
  auto* expand_cmd = app.add_subcommand("expand", "Cantor series digits of x");
  for (auto* cmd : {dim, verify, sample, expand_cmd}) add_common(cmd);

  std::vector<const char*> argv{"cantordim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    const Instance inst = load_instance(opt.instance);
    if (dim->parsed()) return cmd_dim(inst, out);
    if (verify->parsed()) return cmd_verify(inst, opt, out, err);
    if (sample->parsed()) return cmd_sample(inst, opt, out, err);
    return cmd_expand(inst, opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  }
}

}  // namespace cantordim
