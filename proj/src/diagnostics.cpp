#include "sentreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "sentreg/error.hpp"
#include "sentreg/kernels.hpp"
#include "sentreg/special.hpp"

namespace sentreg::diagnostics {

namespace {

std::string row_key(const logit::DesignMatrix& X, std::size_t i) {
  std::string key((X.cols() - 1) * sizeof(double), '\0');
  for (std::size_t j = 1; j < X.cols(); ++j) {
    const double v = X.at(i, j);
    std::memcpy(key.data() + (j - 1) * sizeof(double), &v, sizeof(double));
  }
  return key;
}

bool numerically_degenerate(double p) { return p <= logit::prob_floor() || p >= logit::prob_ceiling(); }

}  // namespace

std::vector<CovariatePattern> covariate_patterns(const logit::DesignMatrix& X) {
  std::vector<CovariatePattern> out;
  std::unordered_map<std::string, std::size_t> index;
  const auto y = X.y();
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto [it, inserted] = index.try_emplace(row_key(X, i), out.size());
    if (inserted) {
      CovariatePattern pat;
      pat.index = out.size();
      out.push_back(std::move(pat));
    }
    auto& pat = out[it->second];
    pat.rows.push_back(i);
    ++pat.m;
    pat.y_sum += y[i];
  }
  return out;
}

std::vector<CovariatePattern> covariate_patterns(const logit::DesignMatrix& X, const logit::LogitFit& fit) {
  auto patterns = covariate_patterns(X);
  const auto p = logit::predict_prob(X, fit.coefficients());
  for (auto& pat : patterns) pat.p_hat = p[pat.rows.front()];
  return patterns;
}

PearsonTest pearson_chi2(std::span<const CovariatePattern> patterns, std::size_t parameters) {
  PearsonTest t;
  t.n_patterns = patterns.size();
  std::vector<double> terms;
  terms.reserve(patterns.size());
  for (const auto& pat : patterns) {
    if (numerically_degenerate(pat.p_hat))
      throw InputError("Pearson chi2: covariate pattern " + std::to_string(pat.index) +
                       " has a fitted probability of 0 or 1");
    const double r = pearson_residual(pat);
    terms.push_back(r * r);
  }
  t.chi2 = kernels::sum(terms);
  t.df = static_cast<long>(patterns.size()) - static_cast<long>(parameters);
  if (t.df > 0) t.p = special::chi2_upper_tail(t.chi2, static_cast<double>(t.df));
  return t;
}

ClassificationSummary classification_summary(std::span<const double> y, std::span<const double> p, double cutoff) {
  if (y.size() != p.size()) throw InputError("classification summary: y and p differ in length");
  ClassificationSummary s;
  s.cutoff = cutoff;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool predicted = logit::classify_threshold(p[i], cutoff) == 1;
    const bool actual = y[i] == 1.0;
    if (actual && predicted) ++s.tp;
    else if (actual) ++s.fn;
    else if (predicted) ++s.fp;
    else ++s.tn;
  }
  const double n = static_cast<double>(s.total());
  s.accuracy = n > 0 ? static_cast<double>(s.tp + s.tn) / n : 0.0;
  if (s.tp + s.fn > 0) s.sensitivity = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
  if (s.tn + s.fp > 0) s.specificity = static_cast<double>(s.tn) / static_cast<double>(s.tn + s.fp);
  return s;
}

ClassificationSummary classification_summary(const logit::LogitFit& fit, const logit::DesignMatrix& X,
                                              double cutoff) {
  const auto p = logit::predict_prob(X, fit.coefficients());
  return classification_summary(X.y(), p, cutoff);
}

double pearson_residual(const CovariatePattern& pattern) {
  const double m = static_cast<double>(pattern.m);
  const double expected = m * pattern.p_hat;
  return (pattern.y_sum - expected) / std::sqrt(expected * (1.0 - pattern.p_hat));
}

std::vector<QqPoint> qq_export(std::span<const CovariatePattern> patterns) {
  std::vector<double> residuals;
  residuals.reserve(patterns.size());
  for (const auto& pat : patterns) {
    if (numerically_degenerate(pat.p_hat))
      throw InputError("QQ export: covariate pattern " + std::to_string(pat.index) +
                       " has a fitted probability of 0 or 1");
    residuals.push_back(pearson_residual(pat));
  }
  std::sort(residuals.begin(), residuals.end());
  const double J = static_cast<double>(residuals.size());
  std::vector<QqPoint> out(residuals.size());
  for (std::size_t i = 0; i < residuals.size(); ++i)
    out[i] = {special::normal_quantile((static_cast<double>(i) + 0.5) / J), residuals[i]};
  return out;
}

std::string_view to_string(VariableKind kind) {
  return kind == VariableKind::Discrete ? "discrete" : "continuous";
}

VariableKind parse_kind(std::string_view name) {
  if (name == "continuous") return VariableKind::Continuous;
  if (name == "discrete") return VariableKind::Discrete;
  throw InputError("unknown variable kind '" + std::string(name) + "' (expected continuous or discrete)");
}

std::vector<VariableKind> kinds_for(const logit::DesignMatrix& X, const std::set<std::string, std::less<>>& discrete) {
  std::vector<VariableKind> kinds;
  for (std::size_t j = 1; j < X.cols(); ++j)
    kinds.push_back(discrete.contains(X.names()[j]) ? VariableKind::Discrete : VariableKind::Continuous);
  return kinds;
}

double average_marginal_effect(std::span<const double> beta, const logit::DesignMatrix& X, std::size_t j,
                               VariableKind kind) {
  const auto eta = logit::linear_predictor(X, beta);
  const double n = static_cast<double>(X.rows());
  std::vector<double> terms(eta.size());
  if (kind == VariableKind::Continuous) {
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double p = logit::logistic(eta[i]);
      terms[i] = p * (1.0 - p);
    }
    return beta[j] * (kernels::sum(terms) / n);
  }
  const auto x = X.column(j);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const double base = eta[i] - beta[j] * x[i];
    terms[i] = logit::logistic(base + beta[j]) - logit::logistic(base);
  }
  return kernels::sum(terms) / n;
}

std::vector<MarginalEffect> marginal_effects(const logit::LogitFit& fit, const logit::DesignMatrix& X,
                                             std::span<const VariableKind> kinds) {
  if (kinds.size() != X.predictors())
    throw InputError("marginal effects: " + std::to_string(kinds.size()) + " kinds for " +
                     std::to_string(X.predictors()) + " predictors");
  const auto params = static_cast<std::size_t>(fit.beta.size());
  std::vector<double> beta(fit.beta.data(), fit.beta.data() + params);

  std::vector<MarginalEffect> out;
  for (std::size_t j = 1; j < X.cols(); ++j) {
    const VariableKind kind = kinds[j - 1];
    MarginalEffect me;
    me.name = X.names()[j];
    me.kind = kind;
    me.dydx = average_marginal_effect(beta, X, j, kind);

    Eigen::RowVectorXd jac(static_cast<Eigen::Index>(params));
    for (std::size_t l = 0; l < params; ++l) {
      const double h = 1e-6 * std::max(1.0, std::fabs(beta[l]));
      auto plus = beta;
      auto minus = beta;
      plus[l] += h;
      minus[l] -= h;
      jac(static_cast<Eigen::Index>(l)) =
          (average_marginal_effect(plus, X, j, kind) - average_marginal_effect(minus, X, j, kind)) /
          (plus[l] - minus[l]);
    }
    const double var = (jac * fit.cov * jac.transpose())(0, 0);
    me.std_err = std::sqrt(std::max(0.0, var));
    me.z = me.dydx / me.std_err;
    me.p = special::normal_two_sided_p(me.z);
    out.push_back(std::move(me));
  }
  return out;
}

}  // namespace sentreg::diagnostics
