#pragma once

// Binary logit model: link, likelihood, Newton/IRLS maximum likelihood fit
// and the likelihood-ratio summaries reported with it.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sentreg::logit {

/// N x (k+1) design with the intercept in column 0, stored column-major so
/// each regressor is a contiguous span for the kernels.
class DesignMatrix {
 public:
  static constexpr const char* kInterceptName = "Constant";

  DesignMatrix() = default;
  /// Prepends an intercept column of ones. Throws InputError on ragged
  /// columns, non-finite entries or a non-binary response.
  DesignMatrix(std::vector<std::string> predictor_names, std::vector<std::vector<double>> predictor_columns,
               std::vector<double> y);

  std::size_t rows() const noexcept { return y_.size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  std::size_t predictors() const noexcept { return columns_.empty() ? 0 : columns_.size() - 1; }

  std::span<const double> column(std::size_t j) const { return columns_[j]; }
  std::span<const double> y() const noexcept { return y_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  double at(std::size_t i, std::size_t j) const { return columns_[j][i]; }
  /// Index of a column by name; throws InputError if absent.
  std::size_t index_of(std::string_view name) const;

  /// Copy with column j replaced (used for counterfactual predictions).
  DesignMatrix with_column(std::size_t j, std::vector<double> values) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::vector<double> y_;
};

/// Smallest and largest probabilities predict_prob returns; values at these
/// bounds are numerically 0 or 1.
double prob_floor();
double prob_ceiling();

double logistic(double eta);
/// log(1 + exp(eta)) without overflow.
double softplus(double eta);

std::vector<double> linear_predictor(const DesignMatrix& X, std::span<const double> beta);
/// exp(eta)/(1+exp(eta)) evaluated on the stable branch for each sign of eta.
std::vector<double> predict_prob(const DesignMatrix& X, std::span<const double> beta);

double odds(double p);
/// ln(p / (1 - p)); throws InputError unless 0 < p < 1.
double log_odds(double p);

/// sum_i [ y_i eta_i - softplus(eta_i) ].
double log_likelihood(std::span<const double> beta, const DesignMatrix& X);
/// X^T (y - p).
Eigen::VectorXd gradient(std::span<const double> beta, const DesignMatrix& X);
/// X^T W X with W = diag(p (1 - p)).
Eigen::MatrixXd information(std::span<const double> beta, const DesignMatrix& X);

struct FitOptions {
  double tol = 1e-10;  // on |change in log-likelihood|
  int max_iter = 100;
};

struct LogitFit {
  std::vector<std::string> names;
  Eigen::VectorXd beta;
  Eigen::MatrixXd cov;
  Eigen::VectorXd std_err;
  Eigen::VectorXd z;
  Eigen::VectorXd p;
  double ll = 0.0;
  double ll0 = 0.0;
  std::size_t n_obs = 0;
  int n_iter = 0;
  bool converged = false;
  std::vector<double> ll_trace;  // log-likelihood after each accepted step, starting at beta = 0

  std::size_t predictors() const { return beta.size() == 0 ? 0 : static_cast<std::size_t>(beta.size()) - 1; }
  std::span<const double> coefficients() const { return {beta.data(), static_cast<std::size_t>(beta.size())}; }
};

/// Newton/IRLS from beta = 0 with step halving. Throws NonIdentifiable,
/// CollinearityError or PerfectSeparation.
LogitFit fit(const DesignMatrix& X, const FitOptions& options = {});

/// 1 iff p >= cutoff; cutoff must lie in (0, 1).
int classify_threshold(double p, double cutoff = 0.5);

struct LrTest {
  double chi2 = 0.0;
  int df = 0;
  double p = 1.0;
};
LrTest lr_test(const LogitFit& fit);
/// McFadden: 1 - ll / ll0.
double pseudo_r2(const LogitFit& fit);

}  // namespace sentreg::logit
