#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cantordim/closed_form.hpp"
#include "cantordim/core_model.hpp"
#include "cantordim/expansion.hpp"
#include "cantordim/variational.hpp"

namespace cantordim {

inline constexpr std::size_t kDefaultSampleCount = 500;

/// Parsed instance file.
///
///   {"alpha": [..] | {"j": v}, "d": {"n": v} | "pattern": [b1, ...],
///    "solver": {"method": "ipf"|"mirror_descent", "tol": v, "max_iter": k},
///    "seed": s, "samples": count}
///
/// Frequencies may be numbers or strings ("1/3", "0.25"); a vector whose
/// entries are all strings is kept in exact rational form.
struct Instance {
  StochasticVector alpha;
  StochasticVector d;
  std::optional<BasePattern> pattern;
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::size_t samples = kDefaultSampleCount;
};

/// Throws ParseError naming the offending field; validation failures of a
/// vector are reported the same way ("alpha: entries sum to ...").
Instance parse_instance(const nlohmann::json& doc);
/// Parses text; syntax errors carry line/column.
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

/// x rounded to `digits` significant decimal digits.
double round_significant(double x, int digits = 15);

nlohmann::json to_json(const FrequencyMatrix& p);
nlohmann::json to_json(const RecursionTable& table);
nlohmann::json to_json(const DimensionReport& report);
nlohmann::json to_json(const FeasibilityReport& report);
nlohmann::json to_json(const KiferReport& report);
nlohmann::json to_json(const FrequencyStats& stats);

FrequencyMatrix frequency_matrix_from_json(const nlohmann::json& j);
RecursionTable recursion_table_from_json(const nlohmann::json& j);
DimensionReport dimension_report_from_json(const nlohmann::json& j);

}  // namespace cantordim
