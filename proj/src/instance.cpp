#include "cantordim/instance.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "cantordim/errors.hpp"

namespace cantordim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

std::size_t parse_index(const std::string& key, const std::string& field) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
    fail(field, "key '" + key + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(std::stoull(key));
}

// A frequency value: number, or string holding an exact rational.
struct Value {
  double real = 0.0;
  std::optional<Rational> exact;
};

Value parse_value(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), std::nullopt};
  if (v.is_string()) {
    try {
      const Rational r = parse_rational(v.get<std::string>());
      return {to_double(r), r};
    } catch (const ParseError& e) {
      fail(field, e.what());
    }
  }
  fail(field, "expected a number or a rational string");
}

StochasticVector parse_vector(const json& v, const std::string& field, bool allow_array) {
  std::map<std::size_t, Value> values;
  if (v.is_array() && allow_array) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      values[i] = parse_value(v[i], field + "[" + std::to_string(i) + "]");
    }
  } else if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      const std::string sub = field + "[\"" + key + "\"]";
      values[parse_index(key, sub)] = parse_value(item, sub);
    }
  } else {
    fail(field, allow_array ? "expected an array or an object" : "expected an object");
  }

  bool all_exact = !values.empty();
  for (const auto& [i, value] : values) all_exact = all_exact && value.exact.has_value();
  try {
    if (all_exact) {
      StochasticVector::ExactEntries exact;
      for (const auto& [i, value] : values) exact.emplace(i, *value.exact);
      return StochasticVector::from_exact(exact);
    }
    StochasticVector::Entries raw;
    for (const auto& [i, value] : values) raw.emplace(i, value.real);
    return StochasticVector::validate(raw);
  } catch (const Error& e) {
    fail(field, e.what());
  }
}

BasePattern parse_pattern(const json& v) {
  if (!v.is_array() || v.empty()) fail("pattern", "expected a nonempty array of bases");
  std::vector<std::uint32_t> bases;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& b = v[i];
    if (!b.is_number_integer() || b.get<std::int64_t>() < 2 ||
        b.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
      fail("pattern[" + std::to_string(i) + "]", "expected an integer base >= 2");
    }
    bases.push_back(static_cast<std::uint32_t>(b.get<std::int64_t>()));
  }
  return BasePattern(std::move(bases));
}

SolverConfig parse_solver(const json& v) {
  SolverConfig cfg;
  if (!v.is_object()) fail("solver", "expected an object");
  for (const auto& [key, item] : v.items()) {
    if (key == "method") {
      if (!item.is_string()) fail("solver.method", "expected a string");
      try {
        cfg.method = solver_method_from_string(item.get<std::string>());
      } catch (const ParseError& e) {
        fail("solver.method", e.what());
      }
    } else if (key == "tol") {
      if (!item.is_number() || !(item.get<double>() > 0.0)) {
        fail("solver.tol", "expected a positive number");
      }
      cfg.tol = item.get<double>();
    } else if (key == "max_iter") {
      if (!item.is_number_integer() || item.get<std::int64_t>() < 1) {
        fail("solver.max_iter", "expected a positive integer");
      }
      cfg.max_iter = item.get<std::size_t>();
    } else {
      fail("solver." + key, "unknown field");
    }
  }
  return cfg;
}

double finite_or_null_value(const json& v) {
  if (v.is_null()) return -std::numeric_limits<double>::infinity();
  return v.get<double>();
}

json rounded(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_significant(x);
}

template <typename Map>
json index_map(const Map& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = rounded(v);
  return out;
}

std::map<std::size_t, double> index_map_from_json(const json& j, const std::string& field) {
  std::map<std::size_t, double> out;
  for (const auto& [key, v] : j.items()) out[parse_index(key, field)] = finite_or_null_value(v);
  return out;
}

}  // namespace

double round_significant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) fail("<root>", "expected a JSON object");
  for (const auto& [key, item] : doc.items()) {
    if (key != "alpha" && key != "d" && key != "pattern" && key != "solver" && key != "seed" &&
        key != "samples") {
      fail(key, "unknown field");
    }
  }
  if (!doc.contains("alpha")) fail("alpha", "missing");
  const bool has_d = doc.contains("d");
  const bool has_pattern = doc.contains("pattern");
  if (has_d == has_pattern) fail("d/pattern", "exactly one of 'd' and 'pattern' is required");

  StochasticVector alpha = parse_vector(doc["alpha"], "alpha", true);
  std::optional<BasePattern> pattern;
  std::optional<StochasticVector> d;
  if (has_pattern) {
    pattern = parse_pattern(doc["pattern"]);
    d = base_frequencies_from_pattern(*pattern);
  } else {
    d = parse_vector(doc["d"], "d", false);
    if (d->support_min() < 2) fail("d", "bases must be >= 2");
  }

  Instance inst{std::move(alpha), std::move(*d), std::move(pattern), {}, 0, kDefaultSampleCount};
  if (doc.contains("solver")) inst.solver = parse_solver(doc["solver"]);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    inst.seed = doc["seed"].get<std::uint64_t>();
  }
  inst.solver.seed = inst.seed;
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_unsigned()) fail("samples", "expected a nonnegative integer");
    inst.samples = doc["samples"].get<std::size_t>();
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  return parse_instance(doc);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_instance_text(text.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json to_json(const FrequencyMatrix& p) {
  json out = json::object();
  for (const auto& [n, row] : p.rows()) {
    json r = json::array();
    for (const double x : row) r.push_back(rounded(x));
    out[std::to_string(n)] = std::move(r);
  }
  return out;
}

json to_json(const RecursionTable& table) {
  json stage = json::object();
  for (const auto& [key, v] : table.alpha_stage) {
    stage[std::to_string(key.first)][std::to_string(key.second)] = rounded(v);
  }
  return {{"j0", table.j0},         {"L", table.L},
          {"A", index_map(table.A)}, {"alpha_stage", stage},
          {"r", index_map(table.r)}, {"t", index_map(table.t)},
          {"log_r", index_map(table.log_r)}, {"log_t", index_map(table.log_t)}};
}

json to_json(const DimensionReport& report) {
  return {{"dimension", rounded(report.dimension)},
          {"numerator_entropy", rounded(report.numerator_entropy)},
          {"denominator_lyapunov", rounded(report.denominator_lyapunov)},
          {"optimal_matrix", to_json(report.optimal_matrix)},
          {"recursion", to_json(report.recursion)}};
}

json to_json(const FeasibilityReport& report) {
  json out = {{"feasible", report.feasible}, {"slack", index_map(report.slack)}};
  out["violated_level"] = report.violated_level ? json(*report.violated_level) : json(nullptr);
  return out;
}

json to_json(const KiferReport& report) {
  json methods = json::array();
  for (const auto& m : report.methods) {
    json item = {{"method", std::string(to_string(m.method))},
                 {"objective", rounded(m.objective)},
                 {"gap", rounded(m.gap)},
                 {"iterations", m.iterations},
                 {"row_residual", rounded(m.row_residual)},
                 {"column_residual", rounded(m.column_residual)},
                 {"converged", m.converged}};
    if (!m.converged) {
      // Decimated residual history, at most ~200 points.
      json history = json::array();
      const std::size_t stride = std::max<std::size_t>(1, m.residual_history.size() / 200);
      for (std::size_t i = 0; i < m.residual_history.size(); i += stride) {
        history.push_back({{"iteration", i + 1}, {"residual", rounded(m.residual_history[i])}});
      }
      item["residual_history"] = std::move(history);
    }
    methods.push_back(std::move(item));
  }
  return {{"closed_form", rounded(report.closed_form)},
          {"methods", methods},
          {"samples", report.samples},
          {"max_sampled", rounded(report.max_sampled)},
          {"max_sample_excess", rounded(report.max_sample_excess)},
          {"passed", report.passed}};
}

json to_json(const FrequencyStats& stats) {
  json joint = json::object();
  for (const auto& [key, c] : stats.tau_joint) {
    joint[std::to_string(key.first)][std::to_string(key.second)] = c;
  }
  json tau = json::object();
  for (const auto& [j, c] : stats.tau) tau[std::to_string(j)] = c;
  json counts = json::object();
  for (const auto& [k, c] : stats.base_counts) counts[std::to_string(k)] = c;
  return {{"n", stats.n}, {"tau", tau}, {"tau_joint", joint}, {"base_counts", counts}};
}

FrequencyMatrix frequency_matrix_from_json(const json& j) {
  FrequencyMatrix::Rows rows;
  for (const auto& [key, row] : j.items()) {
    std::vector<double> values;
    for (const auto& x : row) values.push_back(x.get<double>());
    rows.emplace(static_cast<std::uint32_t>(parse_index(key, "optimal_matrix")), std::move(values));
  }
  return FrequencyMatrix(std::move(rows));
}

RecursionTable recursion_table_from_json(const json& j) {
  RecursionTable table;
  table.j0 = j.at("j0").get<std::size_t>();
  table.L = j.at("L").get<std::size_t>();
  table.A = index_map_from_json(j.at("A"), "A");
  table.r = index_map_from_json(j.at("r"), "r");
  table.t = index_map_from_json(j.at("t"), "t");
  table.log_r = index_map_from_json(j.at("log_r"), "log_r");
  table.log_t = index_map_from_json(j.at("log_t"), "log_t");
  for (const auto& [n, row] : j.at("alpha_stage").items()) {
    for (const auto& [jj, v] : row.items()) {
      table.alpha_stage[{parse_index(n, "alpha_stage"), parse_index(jj, "alpha_stage")}] =
          finite_or_null_value(v);
    }
  }
  return table;
}

DimensionReport dimension_report_from_json(const json& j) {
  try {
    DimensionReport report;
    report.dimension = j.at("dimension").get<double>();
    report.numerator_entropy = j.at("numerator_entropy").get<double>();
    report.denominator_lyapunov = j.at("denominator_lyapunov").get<double>();
    report.optimal_matrix = frequency_matrix_from_json(j.at("optimal_matrix"));
    report.recursion = recursion_table_from_json(j.at("recursion"));
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("dimension report: ") + e.what());
  }
}

}  // namespace cantordim
