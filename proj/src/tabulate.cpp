#include "sentreg/tabulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sentreg/corpus.hpp"
#include "sentreg/csv.hpp"
#include "sentreg/error.hpp"

namespace sentreg::tabulate {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Northeast: return "Northeast";
    case Region::Midwest: return "Midwest";
    case Region::South: return "South";
    case Region::West: return "West";
  }
  return "South";
}

Region parse_region(std::string_view name) {
  const std::string lower = corpus::to_lower(trim(name));
  if (lower == "northeast") return Region::Northeast;
  if (lower == "midwest") return Region::Midwest;
  if (lower == "south") return Region::South;
  if (lower == "west") return Region::West;
  throw InputError("unknown region '" + std::string(name) + "'");
}

RegionDummies region_dummies(Region r) {
  return {r == Region::Northeast ? 1 : 0, r == Region::Midwest ? 1 : 0, r == Region::West ? 1 : 0};
}

CovariateMap load_covariates(const std::filesystem::path& path) {
  return load_covariates(CsvTable::read_file(path));
}

CovariateMap load_covariates(const CsvTable& table) {
  const std::size_t c_state = table.column("state");
  struct NumericColumn {
    std::string_view name;
    double StateCovariates::*field;
    enum { Percent, Positive, NonNegative } rule;
  };
  const NumericColumn numeric[] = {
      {"FHH_pct", &StateCovariates::FHH_pct, NumericColumn::Percent},
      {"AFS", &StateCovariates::AFS, NumericColumn::Positive},
      {"EDU2", &StateCovariates::EDU2, NumericColumn::Percent},
      {"EDU3", &StateCovariates::EDU3, NumericColumn::Percent},
      {"AGE2", &StateCovariates::AGE2, NumericColumn::Percent},
      {"WP", &StateCovariates::WP, NumericColumn::Percent},
      {"OCH", &StateCovariates::OCH, NumericColumn::Percent},
      {"PWHI", &StateCovariates::PWHI, NumericColumn::Percent},
      {"LF", &StateCovariates::LF, NumericColumn::Percent},
      {"POPDEN", &StateCovariates::POPDEN, NumericColumn::Positive},
      {"CASES", &StateCovariates::CASES, NumericColumn::NonNegative},
      {"PR", &StateCovariates::PR, NumericColumn::Percent},
      {"MHHI", &StateCovariates::MHHI, NumericColumn::NonNegative},
      {"GR", &StateCovariates::GR, NumericColumn::NonNegative},
  };
  std::vector<std::size_t> cols;
  for (const auto& nc : numeric) cols.push_back(table.column(nc.name));
  const std::size_t c_region = table.column("region");

  CovariateMap out;
  for (const auto& row : table.rows()) {
    const std::string where = table.source() + ":" + std::to_string(row.line);
    StateCovariates sc;
    sc.state = std::string(trim(row.fields[c_state]));
    if (!corpus::is_state_code(sc.state)) throw InputError(where + ": unknown state code '" + sc.state + "'");
    for (std::size_t k = 0; k < std::size(numeric); ++k) {
      const auto& nc = numeric[k];
      const double v = parse_double(row.fields[cols[k]], where + ": " + std::string(nc.name));
      bool ok = std::isfinite(v);
      const char* rule = "";
      switch (nc.rule) {
        case NumericColumn::Percent:
          ok = ok && v >= 0.0 && v <= 100.0;
          rule = "a percentage in [0, 100]";
          break;
        case NumericColumn::Positive:
          ok = ok && v > 0.0;
          rule = "> 0";
          break;
        case NumericColumn::NonNegative:
          ok = ok && v >= 0.0;
          rule = ">= 0";
          break;
      }
      if (!ok)
        throw InputError(where + ": " + std::string(nc.name) + " = " + std::string(trim(row.fields[cols[k]])) +
                         " out of range (must be " + rule + ")");
      sc.*nc.field = v;
    }
    // The log transform needs a strictly positive family-household share.
    if (!(sc.FHH_pct > 0.0)) throw InputError(where + ": FHH_pct must be > 0");
    try {
      sc.region = parse_region(row.fields[c_region]);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    if (out.contains(sc.state)) throw InputError(where + ": duplicate state '" + sc.state + "'");
    out.emplace(sc.state, std::move(sc));
  }
  return out;
}

std::array<double, kAnalysisColumns.size()> AnalysisRow::values() const {
  return {static_cast<double>(sentiment), TW, static_cast<double>(NE), static_cast<double>(MW),
          static_cast<double>(WEST), L_FHH, AFS, EDU2, EDU3, AGE2, WP, OCH, PWHI, LF, L_POPDEN,
          CASES, PR, MHHI, GR};
}

std::vector<AnalysisRow> join(std::span<const JoinInput> docs, const CovariateMap& covars) {
  std::set<std::string> missing;
  for (const auto& d : docs)
    if (!covars.contains(d.state)) missing.insert(d.state);
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw InputError("no covariates for state(s): " + list);
  }

  std::vector<AnalysisRow> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) {
    const auto& c = covars.find(d.state)->second;
    const auto dummies = region_dummies(c.region);
    AnalysisRow r;
    r.id = d.id;
    r.sentiment = d.binary;
    r.TW = static_cast<double>(d.text_width);
    r.NE = dummies.NE;
    r.MW = dummies.MW;
    r.WEST = dummies.WEST;
    r.L_FHH = std::log(c.FHH_pct);
    r.AFS = c.AFS;
    r.EDU2 = c.EDU2;
    r.EDU3 = c.EDU3;
    r.AGE2 = c.AGE2;
    r.WP = c.WP;
    r.OCH = c.OCH;
    r.PWHI = c.PWHI;
    r.LF = c.LF;
    r.L_POPDEN = std::log(c.POPDEN);
    r.CASES = c.CASES;
    r.PR = c.PR;
    r.MHHI = c.MHHI;
    r.GR = c.GR;
    rows.push_back(std::move(r));
  }
  return rows;
}

ColumnStats describe(std::string name, std::span<const double> column) {
  if (column.size() < 2)
    throw InputError("descriptive statistics for '" + name + "' need at least 2 observations");
  // Welford's update; stable for the large-magnitude columns (MHHI, CASES).
  ColumnStats s;
  s.name = std::move(name);
  s.n = column.size();
  s.min = column[0];
  s.max = column[0];
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : column) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = std::clamp(mean, s.min, s.max);
  s.sd = std::sqrt(std::max(0.0, m2 / static_cast<double>(s.n - 1)));
  return s;
}

std::vector<ColumnStats> descriptive_stats(std::span<const AnalysisRow> rows) {
  std::vector<ColumnStats> out;
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < kAnalysisColumns.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i].values()[j];
    out.push_back(describe(std::string(kAnalysisColumns[j]), column));
  }
  return out;
}

std::string analysis_table_csv(std::span<const AnalysisRow> rows) {
  std::vector<std::string> header{"id"};
  for (auto c : kAnalysisColumns) header.emplace_back(c);
  std::string out = csv_line(header);
  for (const auto& r : rows) {
    std::vector<std::string> fields{r.id};
    for (double v : r.values()) fields.push_back(format_double(v));
    out += csv_line(fields);
  }
  return out;
}

std::string descriptives_csv(std::span<const ColumnStats> stats) {
  std::string out = csv_line({"variable", "n", "mean", "sd", "min", "max"});
  for (const auto& s : stats)
    out += csv_line({s.name, std::to_string(s.n), format_double(s.mean), format_double(s.sd),
                     format_double(s.min), format_double(s.max)});
  return out;
}

}  // namespace sentreg::tabulate
