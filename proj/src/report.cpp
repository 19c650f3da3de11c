#include "sentreg/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sentreg/csv.hpp"
#include "sentreg/error.hpp"
#include "sentreg/special.hpp"

namespace sentreg::report {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// Three decimals as in published logit tables; tiny nonzero values fall back
// to three significant digits so they do not print as 0.000.
std::string fmt_stat(double v) {
  if (!std::isfinite(v)) return ".";
  if (v != 0.0 && std::fabs(v) < 0.0005) return fmt::format("{:.3g}", v);
  return fmt::format("{:.3f}", v);
}

std::string fmt_pct(const Json& v) {
  if (v.is_null()) return "n/a";
  return fmt::format("{:.2f}%", 100.0 * v.get<double>());
}

void require(const Json& obj, const char* key, bool ok, const char* what) {
  if (!ok) throw InputError(std::string("fit report: '") + key + "' " + what);
  (void)obj;
}

bool is_count(const Json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

void require_number(const Json& obj, const char* key, bool nullable = false) {
  require(obj, key, obj.contains(key), "is missing");
  const auto& v = obj.at(key);
  require(obj, key, v.is_number() || (nullable && v.is_null()), "must be a number");
}

void require_columns(const CsvTable& table, std::initializer_list<const char*> names) {
  if (table.header().size() != names.size())
    throw InputError(table.source() + ": expected " + std::to_string(names.size()) + " columns, found " +
                     std::to_string(table.header().size()));
  std::size_t i = 0;
  for (const char* n : names) {
    if (table.header()[i] != n)
      throw InputError(table.source() + ": column " + std::to_string(i + 1) + " must be '" + n + "', found '" +
                       table.header()[i] + "'");
    ++i;
  }
}

}  // namespace

Json fit_json(const logit::LogitFit& fit, const std::string& response) {
  const auto lr = logit::lr_test(fit);
  Json j;
  j["model"] = "binary_logit";
  j["response"] = response;
  j["n_obs"] = fit.n_obs;
  Json coefs = Json::array();
  for (Eigen::Index k = 0; k < fit.beta.size(); ++k) {
    coefs.push_back({{"name", fit.names[static_cast<std::size_t>(k)]},
                     {"coef", fit.beta(k)},
                     {"std_err", number_or_null(fit.std_err(k))},
                     {"z", number_or_null(fit.z(k))},
                     {"p", number_or_null(fit.p(k))}});
  }
  j["coefficients"] = std::move(coefs);
  j["ll"] = fit.ll;
  j["ll0"] = fit.ll0;
  j["lr_chi2"] = lr.chi2;
  j["df"] = lr.df;
  j["lr_p"] = lr.p;
  j["pseudo_r2"] = logit::pseudo_r2(fit);
  j["n_iter"] = fit.n_iter;
  j["converged"] = fit.converged;
  Json cov = Json::array();
  for (Eigen::Index r = 0; r < fit.cov.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < fit.cov.cols(); ++c) row.push_back(fit.cov(r, c));
    cov.push_back(std::move(row));
  }
  j["cov"] = std::move(cov);
  return j;
}

logit::LogitFit fit_from_json(const Json& report) {
  validate_fit_report(report);
  logit::LogitFit fit;
  const auto& coefs = report.at("coefficients");
  const auto p = static_cast<Eigen::Index>(coefs.size());
  fit.beta.resize(p);
  fit.cov.resize(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    fit.names.push_back(coefs[static_cast<std::size_t>(k)].at("name").get<std::string>());
    fit.beta(k) = coefs[static_cast<std::size_t>(k)].at("coef").get<double>();
    for (Eigen::Index c = 0; c < p; ++c)
      fit.cov(k, c) = report.at("cov")[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)].get<double>();
  }
  fit.std_err = fit.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.z = fit.beta.cwiseQuotient(fit.std_err);
  fit.p.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) fit.p(k) = special::normal_two_sided_p(fit.z(k));
  fit.ll = report.at("ll").get<double>();
  fit.ll0 = report.at("ll0").get<double>();
  fit.n_obs = report.at("n_obs").get<std::size_t>();
  fit.n_iter = report.at("n_iter").get<int>();
  fit.converged = report.at("converged").get<bool>();
  return fit;
}

Json diagnostics_json(const diagnostics::PearsonTest& pearson, const diagnostics::ClassificationSummary& cls) {
  Json d;
  d["pearson"] = {{"chi2", pearson.chi2},
                  {"df", pearson.df},
                  {"p", optional_number(pearson.p)},
                  {"n_patterns", pearson.n_patterns}};
  d["classification"] = {{"accuracy", cls.accuracy},
                         {"sensitivity", optional_number(cls.sensitivity)},
                         {"specificity", optional_number(cls.specificity)},
                         {"cutoff", cls.cutoff},
                         {"tp", cls.tp},
                         {"tn", cls.tn},
                         {"fp", cls.fp},
                         {"fn", cls.fn}};
  return d;
}

std::string human_report(const Json& report) {
  validate_fit_report(report);
  std::string out;
  const auto& coefs = report.at("coefficients");
  const int df = report.at("df").get<int>();

  out += "Binary logit model\n\n";
  out += fmt::format("{:<22}= {}\n", "Number of obs", report.at("n_obs").get<std::size_t>());
  out += fmt::format("{:<22}= {:.3f}\n", fmt::format("LR chi2({})", df), report.at("lr_chi2").get<double>());
  out += fmt::format("{:<22}= {:.3f}\n", "Prob > chi2", report.at("lr_p").get<double>());
  out += fmt::format("{:<22}= {:.3f}\n", "Pseudo R2", report.at("pseudo_r2").get<double>());
  out += fmt::format("{:<22}= {:.3f}\n", "Log-likelihood", report.at("ll").get<double>());
  out += fmt::format("{:<22}= {}{}\n\n", "Iterations", report.at("n_iter").get<int>(),
                     report.at("converged").get<bool>() ? "" : " (not converged)");

  const std::string rule(66, '-');
  out += rule + "\n";
  out += fmt::format("{:<16}|{:>12}{:>12}{:>12}{:>12}\n", report.at("response").get<std::string>(), "Coef.",
                     "Std. Err.", "z", "P>z");
  out += std::string(16, '-') + "+" + std::string(49, '-') + "\n";
  auto row = [&](const Json& c) {
    auto num = [](const Json& v) { return v.is_null() ? std::string(".") : fmt_stat(v.get<double>()); };
    out += fmt::format("{:<16}|{:>12}{:>12}{:>12}{:>12}\n", c.at("name").get<std::string>(), num(c.at("coef")),
                       num(c.at("std_err")), num(c.at("z")), num(c.at("p")));
  };
  // Slopes first, the intercept last.
  for (std::size_t k = 1; k < coefs.size(); ++k) row(coefs[k]);
  if (!coefs.empty()) row(coefs[0]);
  out += rule + "\n";

  if (report.contains("diagnostics")) {
    const auto& d = report.at("diagnostics");
    const auto& pr = d.at("pearson");
    out += "\nGoodness-of-fit test\n";
    out += fmt::format("{:<32}= {}\n", "Number of observations", report.at("n_obs").get<std::size_t>());
    out += fmt::format("{:<32}= {}\n", "Number of covariate patterns", pr.at("n_patterns").get<std::size_t>());
    out += fmt::format("{:<32}= {:.2f}\n", fmt::format("Pearson chi2({})", pr.at("df").get<long>()),
                       pr.at("chi2").get<double>());
    out += fmt::format("{:<32}= {}\n", "Prob > chi2",
                       pr.at("p").is_null() ? std::string("n/a (df <= 0)")
                                            : fmt::format("{:.4f}", pr.at("p").get<double>()));

    const auto& c = d.at("classification");
    out += fmt::format("\nClassification summary (cutoff {})\n", format_double(c.at("cutoff").get<double>()));
    out += fmt::format("{:<32}{}\n", "Correctly classified", fmt_pct(c.at("accuracy")));
    out += fmt::format("{:<32}{}\n", "Sensitivity  Pr(+ | y=1)", fmt_pct(c.at("sensitivity")));
    out += fmt::format("{:<32}{}\n", "Specificity  Pr(- | y=0)", fmt_pct(c.at("specificity")));
    out += fmt::format("{:<32}tp={} fn={} fp={} tn={}\n", "Confusion counts", c.at("tp").get<std::size_t>(),
                       c.at("fn").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("tn").get<std::size_t>());
  }
  return out;
}

std::string margins_csv(std::span<const diagnostics::MarginalEffect> effects) {
  std::string out = csv_line({"variable", "dydx", "std_err", "z", "p"});
  for (const auto& e : effects)
    out += csv_line({e.name, format_double(e.dydx), format_double(e.std_err), format_double(e.z), format_double(e.p)});
  return out;
}

std::string qq_csv(std::span<const diagnostics::QqPoint> points) {
  std::string out = csv_line({"theoretical", "residual"});
  for (const auto& q : points) out += csv_line({format_double(q.theoretical), format_double(q.residual)});
  return out;
}

void validate_fit_report(const Json& r) {
  if (!r.is_object()) throw InputError("fit report: top level must be an object");
  require(r, "model", r.contains("model") && r.at("model") == "binary_logit", "must be \"binary_logit\"");
  require(r, "response", r.contains("response") && r.at("response").is_string(), "must be a string");
  require(r, "n_obs", r.contains("n_obs") && is_count(r.at("n_obs")), "must be a count");
  require(r, "coefficients", r.contains("coefficients") && r.at("coefficients").is_array() &&
                                 !r.at("coefficients").empty(),
          "must be a non-empty array");
  for (const auto& c : r.at("coefficients")) {
    require(c, "coefficients[].name", c.is_object() && c.contains("name") && c.at("name").is_string(),
            "must be a string");
    require_number(c, "coef");
    for (const char* k : {"std_err", "z", "p"}) require_number(c, k, true);
  }
  for (const char* k : {"ll", "ll0", "lr_chi2", "lr_p", "pseudo_r2"}) require_number(r, k);
  require(r, "df", r.contains("df") && r.at("df").is_number_integer(), "must be an integer");
  require(r, "n_iter", r.contains("n_iter") && r.at("n_iter").is_number_integer(), "must be an integer");
  require(r, "converged", r.contains("converged") && r.at("converged").is_boolean(), "must be a boolean");
  const std::size_t p = r.at("coefficients").size();
  require(r, "cov", r.contains("cov") && r.at("cov").is_array() && r.at("cov").size() == p,
          "must be a square matrix matching the coefficients");
  for (const auto& row : r.at("cov")) {
    require(r, "cov", row.is_array() && row.size() == p, "must be a square matrix matching the coefficients");
    for (const auto& v : row) require(r, "cov", v.is_number(), "entries must be numbers");
  }
  if (r.contains("diagnostics")) {
    const auto& d = r.at("diagnostics");
    require(r, "diagnostics.pearson", d.contains("pearson") && d.at("pearson").is_object(), "is missing");
    const auto& pr = d.at("pearson");
    require_number(pr, "chi2");
    require_number(pr, "p", true);
    require(pr, "pearson.df", pr.contains("df") && pr.at("df").is_number_integer(), "must be an integer");
    require(pr, "pearson.n_patterns", pr.contains("n_patterns") && is_count(pr.at("n_patterns")),
            "must be a count");
    require(r, "diagnostics.classification", d.contains("classification") && d.at("classification").is_object(),
            "is missing");
    const auto& c = d.at("classification");
    require_number(c, "accuracy");
    require_number(c, "sensitivity", true);
    require_number(c, "specificity", true);
    require_number(c, "cutoff");
    for (const char* k : {"tp", "tn", "fp", "fn"})
      require(c, k, c.contains(k) && is_count(c.at(k)), "must be a count");
  }
}

void validate_margins(const CsvTable& table) {
  require_columns(table, {"variable", "dydx", "std_err", "z", "p"});
  for (const auto& row : table.rows()) {
    if (row.fields[0].empty()) throw InputError(table.source() + ":" + std::to_string(row.line) + ": empty variable");
    for (std::size_t k = 1; k < row.fields.size(); ++k)
      parse_double(row.fields[k], table.source() + ":" + std::to_string(row.line) + ": " + table.header()[k]);
  }
}

void validate_qq(const CsvTable& table) {
  require_columns(table, {"theoretical", "residual"});
  double prev_t = -INFINITY, prev_r = -INFINITY;
  for (const auto& row : table.rows()) {
    const std::string where = table.source() + ":" + std::to_string(row.line);
    const double t = parse_double(row.fields[0], where + ": theoretical");
    const double r = parse_double(row.fields[1], where + ": residual");
    if (t < prev_t || r < prev_r) throw InputError(where + ": QQ columns must be sorted ascending");
    prev_t = t;
    prev_r = r;
  }
}

}  // namespace sentreg::report
