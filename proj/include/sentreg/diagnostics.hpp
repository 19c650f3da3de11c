#pragma once

// Goodness of fit over covariate patterns, classification summaries, residual
// QQ data and average marginal effects for a fitted logit.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentreg/logit.hpp"

namespace sentreg::diagnostics {

struct CovariatePattern {
  std::size_t index = 0;
  std::vector<std::size_t> rows;
  std::size_t m = 0;
  double y_sum = 0.0;
  double p_hat = 0.0;
};

/// Groups rows whose covariate vectors are bitwise identical, ordered by first
/// occurrence. p_hat is left at 0.
std::vector<CovariatePattern> covariate_patterns(const logit::DesignMatrix& X);
/// Same grouping with p_hat filled from the fit.
std::vector<CovariatePattern> covariate_patterns(const logit::DesignMatrix& X, const logit::LogitFit& fit);

struct PearsonTest {
  double chi2 = 0.0;
  long df = 0;
  std::optional<double> p;  // absent when df <= 0
  std::size_t n_patterns = 0;
};

/// sum_j (y_j - m_j p_j)^2 / (m_j p_j (1 - p_j)) with df = J - parameters.
/// Throws InputError when a pattern's fitted probability is numerically 0 or 1.
PearsonTest pearson_chi2(std::span<const CovariatePattern> patterns, std::size_t parameters);

struct ClassificationSummary {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  double cutoff = 0.5;
  double accuracy = 0.0;
  std::optional<double> sensitivity;  // tp / (tp + fn), absent without positives
  std::optional<double> specificity;  // tn / (tn + fp), absent without negatives

  std::size_t total() const { return tp + tn + fp + fn; }
};

ClassificationSummary classification_summary(std::span<const double> y, std::span<const double> p,
                                             double cutoff = 0.5);
ClassificationSummary classification_summary(const logit::LogitFit& fit, const logit::DesignMatrix& X,
                                              double cutoff = 0.5);

double pearson_residual(const CovariatePattern& pattern);

struct QqPoint {
  double theoretical = 0.0;
  double residual = 0.0;
};
/// Sorted Pearson residuals against normal quantiles at (i - 0.5) / J.
std::vector<QqPoint> qq_export(std::span<const CovariatePattern> patterns);

enum class VariableKind { Continuous, Discrete };
std::string_view to_string(VariableKind kind);
/// Throws InputError for anything but "continuous" / "discrete".
VariableKind parse_kind(std::string_view name);
/// One kind per predictor (intercept excluded); names in `discrete` are Discrete.
std::vector<VariableKind> kinds_for(const logit::DesignMatrix& X, const std::set<std::string, std::less<>>& discrete);

struct MarginalEffect {
  std::string name;
  VariableKind kind = VariableKind::Continuous;
  double dydx = 0.0;
  double std_err = 0.0;
  double z = 0.0;
  double p = 1.0;
};

/// Average marginal effect of predictor `j` (a design column index >= 1) at
/// coefficients `beta`.
double average_marginal_effect(std::span<const double> beta, const logit::DesignMatrix& X, std::size_t j,
                               VariableKind kind);

/// AMEs for every predictor with delta-method standard errors; the Jacobian
/// is taken by central differences with relative step 1e-6.
std::vector<MarginalEffect> marginal_effects(const logit::LogitFit& fit, const logit::DesignMatrix& X,
                                             std::span<const VariableKind> kinds);

}  // namespace sentreg::diagnostics
