#pragma once

// State covariates, regional dummies, the document/covariate join, and
// descriptive statistics of the resulting analysis table.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentreg {
class CsvTable;
}

namespace sentreg::tabulate {

enum class Region { Northeast, Midwest, South, West };
std::string_view to_string(Region r);
Region parse_region(std::string_view name);

struct StateCovariates {
  std::string state;
  double FHH_pct = 0;  // percent family households
  double AFS = 0;      // average family size
  double EDU2 = 0;
  double EDU3 = 0;
  double AGE2 = 0;
  double WP = 0;
  double OCH = 0;
  double PWHI = 0;
  double LF = 0;
  double POPDEN = 0;  // persons per square mile
  double CASES = 0;   // per 1M people
  double PR = 0;
  double MHHI = 0;  // dollars
  double GR = 0;    // dollars
  Region region = Region::South;
};

using CovariateMap = std::map<std::string, StateCovariates, std::less<>>;

/// Header: state,FHH_pct,AFS,EDU2,EDU3,AGE2,WP,OCH,PWHI,LF,POPDEN,CASES,PR,MHHI,GR,region
CovariateMap load_covariates(const std::filesystem::path& path);
CovariateMap load_covariates(const CsvTable& table);

struct RegionDummies {
  int NE = 0;
  int MW = 0;
  int WEST = 0;
};
/// South is the omitted baseline.
RegionDummies region_dummies(Region r);

/// Column codes of the analysis table after `id`, response first.
inline constexpr std::array<std::string_view, 19> kAnalysisColumns = {
    "sentiment", "TW",   "NE",   "MW", "WEST",     "L_FHH", "AFS", "EDU2", "EDU3", "AGE2",
    "WP",        "OCH",  "PWHI", "LF", "L_POPDEN", "CASES", "PR",  "MHHI", "GR"};

/// Regressors that are 0/1 indicators.
inline constexpr std::array<std::string_view, 3> kDiscreteColumns = {"NE", "MW", "WEST"};

struct AnalysisRow {
  std::string id;
  int sentiment = 0;
  double TW = 0;
  int NE = 0, MW = 0, WEST = 0;
  double L_FHH = 0, AFS = 0, EDU2 = 0, EDU3 = 0, AGE2 = 0, WP = 0, OCH = 0, PWHI = 0, LF = 0;
  double L_POPDEN = 0, CASES = 0, PR = 0, MHHI = 0, GR = 0;

  /// Values in kAnalysisColumns order.
  std::array<double, kAnalysisColumns.size()> values() const;
};

struct JoinInput {
  std::string id;
  std::string state;
  std::size_t text_width = 0;
  int binary = 0;
};

/// One row per input, in input order. Throws InputError listing every state
/// with no covariate row.
std::vector<AnalysisRow> join(std::span<const JoinInput> docs, const CovariateMap& covars);

struct ColumnStats {
  std::string name;
  std::size_t n = 0;
  double mean = 0;
  double sd = 0;  // sample (n-1)
  double min = 0;
  double max = 0;
};

/// Stats for one column; throws InputError when fewer than two values.
ColumnStats describe(std::string name, std::span<const double> column);
/// Every kAnalysisColumns variable over the table.
std::vector<ColumnStats> descriptive_stats(std::span<const AnalysisRow> rows);

std::string analysis_table_csv(std::span<const AnalysisRow> rows);
std::string descriptives_csv(std::span<const ColumnStats> stats);

}  // namespace sentreg::tabulate
