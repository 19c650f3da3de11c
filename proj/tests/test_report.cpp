#include <cmath>

#include "doctest.h"
#include "sentreg/csv.hpp"
#include "sentreg/diagnostics.hpp"
#include "sentreg/error.hpp"
#include "sentreg/report.hpp"
#include "support.hpp"

using namespace sentreg;
using namespace sentreg::report;

namespace {

Json sample_report() {
  const auto X = testing::design(testing::simulate_logit(300, {0.1, 0.6, -0.4}, 6));
  return fit_json(logit::fit(X), "sentiment");
}

}  // namespace

TEST_CASE("fit report round-trips through JSON text") {
  const auto X = testing::design(testing::simulate_logit(300, {0.1, 0.6, -0.4}, 6));
  const auto f = logit::fit(X);
  const auto text = fit_json(f, "sentiment").dump(2);
  const auto back = fit_from_json(Json::parse(text));
  CHECK(back.names == f.names);
  CHECK(back.beta == f.beta);
  CHECK(back.cov == f.cov);
  CHECK(back.ll == f.ll);
  CHECK(back.ll0 == f.ll0);
  CHECK(back.n_obs == f.n_obs);
  CHECK(back.n_iter == f.n_iter);
  for (Eigen::Index k = 0; k < f.beta.size(); ++k) {
    CHECK(back.std_err(k) == doctest::Approx(f.std_err(k)).epsilon(1e-15));
    CHECK(back.p(k) == doctest::Approx(f.p(k)).epsilon(1e-12));
  }
  CHECK(fit_json(back, "sentiment").dump() == fit_json(f, "sentiment").dump());
}

TEST_CASE("fit report schema rejects malformed documents") {
  CHECK_NOTHROW(validate_fit_report(sample_report()));
  auto drop = [](const char* key) {
    auto r = sample_report();
    r.erase(key);
    return r;
  };
  for (const char* key : {"model", "response", "n_obs", "coefficients", "ll", "ll0", "df", "converged", "cov"})
    CHECK_THROWS_WITH_AS(validate_fit_report(drop(key)), doctest::Contains(key), InputError);

  auto r = sample_report();
  r["model"] = "probit";
  CHECK_THROWS_AS(validate_fit_report(r), InputError);
  r = sample_report();
  r["coefficients"][1]["coef"] = "big";
  CHECK_THROWS_WITH_AS(validate_fit_report(r), doctest::Contains("coef"), InputError);
  r = sample_report();
  r["cov"].erase(0);
  CHECK_THROWS_WITH_AS(validate_fit_report(r), doctest::Contains("cov"), InputError);
  r = sample_report();
  r["coefficients"][0]["std_err"] = nullptr;
  CHECK_NOTHROW(validate_fit_report(r));
  CHECK_THROWS_AS(validate_fit_report(Json::array()), InputError);

  r = sample_report();
  r["diagnostics"] = {{"pearson", {{"chi2", 1.0}, {"df", 2}, {"p", nullptr}, {"n_patterns", 5}}}};
  CHECK_THROWS_WITH_AS(validate_fit_report(r), doctest::Contains("classification"), InputError);
}

TEST_CASE("human report layout") {
  const auto X = testing::two_by_two();
  const auto f = logit::fit(X);
  auto r = fit_json(f, "sentiment");
  const auto pats = diagnostics::covariate_patterns(X, f);
  r["diagnostics"] = diagnostics_json(diagnostics::pearson_chi2(pats, X.cols()),
                                      diagnostics::classification_summary(f, X, 0.5));
  const auto text = human_report(r);
  CHECK(text.starts_with("Binary logit model"));
  CHECK(text.find("Number of obs         = 40") != std::string::npos);
  CHECK(text.find("LR chi2(1)") != std::string::npos);
  CHECK(text.find("Coef.") != std::string::npos);
  CHECK(text.find("Std. Err.") != std::string::npos);
  CHECK(text.find("P>z") != std::string::npos);
  const auto x_pos = text.find("\nx ");
  const auto c_pos = text.find("\nConstant ");
  REQUIRE(x_pos != std::string::npos);
  REQUIRE(c_pos != std::string::npos);
  CHECK(x_pos < c_pos);
  CHECK(text.find("1.099") != std::string::npos);
  CHECK(text.find("Number of covariate patterns    = 2") != std::string::npos);
  CHECK(text.find("n/a (df <= 0)") != std::string::npos);
  CHECK(text.find("Correctly classified            62.50%") != std::string::npos);
}

TEST_CASE("margins and QQ CSV validators") {
  const std::vector<diagnostics::MarginalEffect> me = {{"AFS", diagnostics::VariableKind::Continuous, 0.1, 0.02, 5, 1e-7}};
  const auto t = CsvTable::parse(margins_csv(me), "margins.csv");
  CHECK_NOTHROW(validate_margins(t));
  CHECK(t.rows().size() == 1);
  CHECK_THROWS_AS(validate_margins(CsvTable::parse("variable,dydx,se,z,p\n", "m")), InputError);
  CHECK_THROWS_AS(validate_margins(CsvTable::parse("variable,dydx,std_err,z,p\nAFS,x,1,1,1\n", "m")), InputError);

  const std::vector<diagnostics::QqPoint> q = {{-1, -0.5}, {0, 0.1}, {1, 2}};
  CHECK_NOTHROW(validate_qq(CsvTable::parse(qq_csv(q), "qq.csv")));
  CHECK_THROWS_WITH_AS(validate_qq(CsvTable::parse("theoretical,residual\n0,1\n1,0\n", "qq.csv")),
                       doctest::Contains("sorted"), InputError);
  CHECK_THROWS_AS(validate_qq(CsvTable::parse("residual,theoretical\n", "qq.csv")), InputError);
}
