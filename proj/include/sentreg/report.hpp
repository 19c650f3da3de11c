#pragma once

// Machine-readable and human-readable fit/diagnostic reports, plus the schema
// checks that guard stage boundaries.

#include <span>
#include <string>

#include "json.hpp"
#include "sentreg/diagnostics.hpp"
#include "sentreg/logit.hpp"

namespace sentreg {
class CsvTable;
}

namespace sentreg::report {

using Json = nlohmann::ordered_json;

Json fit_json(const logit::LogitFit& fit, const std::string& response);
/// Rebuilds the fit (coefficients, covariance, likelihoods) from a report.
logit::LogitFit fit_from_json(const Json& report);

Json diagnostics_json(const diagnostics::PearsonTest& pearson, const diagnostics::ClassificationSummary& cls);

/// Coefficient table in the usual Coef./Std. Err./z/P>z layout, followed by
/// the goodness-of-fit and classification blocks when present.
std::string human_report(const Json& report);

std::string margins_csv(std::span<const diagnostics::MarginalEffect> effects);
std::string qq_csv(std::span<const diagnostics::QqPoint> points);

// Each validator throws InputError naming the first offending key or column.
void validate_fit_report(const Json& report);
void validate_margins(const CsvTable& table);
void validate_qq(const CsvTable& table);

}  // namespace sentreg::report
