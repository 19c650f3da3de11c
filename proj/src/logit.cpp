#include "sentreg/logit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sentreg/error.hpp"
#include "sentreg/kernels.hpp"
#include "sentreg/special.hpp"

namespace sentreg::logit {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr int kMaxHalvings = 60;
constexpr double kSeparationBound = 30.0;

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Rank-revealing solve of the information matrix. The matrix is scaled to a
// unit diagonal first so the pivot tolerance does not depend on the units of
// the regressors.
class InformationSolver {
 public:
  InformationSolver(const Eigen::MatrixXd& info, const std::vector<std::string>& names) {
    const auto p = info.rows();
    scale_ = Eigen::VectorXd(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double d = info(j, j);
      scale_(j) = d > 0.0 && std::isfinite(d) ? 1.0 / std::sqrt(d) : 0.0;
    }
    std::vector<std::string> dependent;
    for (Eigen::Index j = 0; j < p; ++j)
      if (scale_(j) == 0.0) dependent.push_back(names[static_cast<std::size_t>(j)]);
    if (!dependent.empty()) throw_collinear(dependent);

    const Eigen::MatrixXd scaled = scale_.asDiagonal() * info * scale_.asDiagonal();
    qr_.setThreshold(kPivotTolerance);
    qr_.compute(scaled);
    if (qr_.rank() < p) {
      const auto& perm = qr_.colsPermutation().indices();
      for (Eigen::Index r = qr_.rank(); r < p; ++r) dependent.push_back(names[static_cast<std::size_t>(perm(r))]);
      std::sort(dependent.begin(), dependent.end());
      throw_collinear(dependent);
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    return scale_.asDiagonal() * qr_.solve(scale_.asDiagonal() * rhs);
  }

  Eigen::MatrixXd inverse() const {
    Eigen::MatrixXd inv = scale_.asDiagonal() * qr_.inverse() * scale_.asDiagonal();
    return 0.5 * (inv + inv.transpose());
  }

 private:
  [[noreturn]] static void throw_collinear(const std::vector<std::string>& columns) {
    std::string list;
    for (const auto& c : columns) list += (list.empty() ? "" : ", ") + c;
    throw CollinearityError("collinear design: information matrix is rank deficient in column(s) " + list,
                            columns);
  }

  Eigen::VectorXd scale_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

}  // namespace

DesignMatrix::DesignMatrix(std::vector<std::string> predictor_names,
                           std::vector<std::vector<double>> predictor_columns, std::vector<double> y)
    : y_(std::move(y)) {
  if (predictor_names.size() != predictor_columns.size())
    throw InputError("design: " + std::to_string(predictor_names.size()) + " names for " +
                     std::to_string(predictor_columns.size()) + " columns");
  for (double v : y_)
    if (v != 0.0 && v != 1.0) throw InputError("design: response must be 0 or 1");
  names_.reserve(predictor_names.size() + 1);
  names_.emplace_back(kInterceptName);
  columns_.emplace_back(y_.size(), 1.0);
  for (std::size_t j = 0; j < predictor_columns.size(); ++j) {
    if (predictor_columns[j].size() != y_.size())
      throw InputError("design: column '" + predictor_names[j] + "' has " +
                       std::to_string(predictor_columns[j].size()) + " rows, expected " + std::to_string(y_.size()));
    for (double v : predictor_columns[j])
      if (!std::isfinite(v)) throw InputError("design: column '" + predictor_names[j] + "' has a non-finite entry");
    names_.push_back(std::move(predictor_names[j]));
    columns_.push_back(std::move(predictor_columns[j]));
  }
}

std::size_t DesignMatrix::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return j;
  throw InputError("design: no column named '" + std::string(name) + "'");
}

DesignMatrix DesignMatrix::with_column(std::size_t j, std::vector<double> values) const {
  DesignMatrix copy = *this;
  copy.columns_.at(j) = std::move(values);
  return copy;
}

double prob_floor() { return std::numeric_limits<double>::denorm_min(); }
double prob_ceiling() { return std::nextafter(1.0, 0.0); }

double logistic(double eta) {
  double p;
  if (eta < 0.0) {
    const double e = std::exp(eta);
    p = e / (1.0 + e);
  } else {
    p = 1.0 / (1.0 + std::exp(-eta));
  }
  return std::clamp(p, prob_floor(), prob_ceiling());
}

double softplus(double eta) { return std::max(eta, 0.0) + std::log1p(std::exp(-std::fabs(eta))); }

std::vector<double> linear_predictor(const DesignMatrix& X, std::span<const double> beta) {
  if (beta.size() != X.cols())
    throw InputError("dimension mismatch: " + std::to_string(beta.size()) + " coefficients for " +
                     std::to_string(X.cols()) + " columns");
  std::vector<double> eta(X.rows(), 0.0);
  for (std::size_t j = 0; j < X.cols(); ++j) kernels::axpy(beta[j], X.column(j), eta);
  return eta;
}

std::vector<double> predict_prob(const DesignMatrix& X, std::span<const double> beta) {
  std::vector<double> p = linear_predictor(X, beta);
  for (double& v : p) v = logistic(v);
  return p;
}

double odds(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("odds: p must lie in (0, 1)");
  return p / (1.0 - p);
}

double log_odds(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("log_odds: p must lie in (0, 1)");
  return std::log(p) - std::log1p(-p);
}

double log_likelihood(std::span<const double> beta, const DesignMatrix& X) {
  std::vector<double> terms = linear_predictor(X, beta);
  const auto y = X.y();
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = y[i] * terms[i] - softplus(terms[i]);
  return kernels::sum(terms);
}

Eigen::VectorXd gradient(std::span<const double> beta, const DesignMatrix& X) {
  std::vector<double> resid = predict_prob(X, beta);
  const auto y = X.y();
  for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = y[i] - resid[i];
  Eigen::VectorXd g(static_cast<Eigen::Index>(X.cols()));
  for (std::size_t j = 0; j < X.cols(); ++j) g(static_cast<Eigen::Index>(j)) = kernels::dot(X.column(j), resid);
  return g;
}

namespace {

Eigen::MatrixXd weighted_gram(const DesignMatrix& X, std::span<const double> w) {
  const auto p = static_cast<Eigen::Index>(X.cols());
  Eigen::MatrixXd info(p, p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a; b < p; ++b) {
      const double v = kernels::wdot(w, X.column(static_cast<std::size_t>(a)), X.column(static_cast<std::size_t>(b)));
      info(a, b) = v;
      info(b, a) = v;
    }
  return info;
}

std::vector<double> weights(std::span<const double> p) {
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i] * (1.0 - p[i]);
  return w;
}

}  // namespace

Eigen::MatrixXd information(std::span<const double> beta, const DesignMatrix& X) {
  const auto p = predict_prob(X, beta);
  return weighted_gram(X, weights(p));
}

LogitFit fit(const DesignMatrix& X, const FitOptions& options) {
  const std::size_t n = X.rows();
  const std::size_t params = X.cols();
  if (params == 0) throw InputError("fit: design has no columns");
  if (!(options.tol > 0.0) || options.max_iter < 1) throw InputError("fit: tol must be > 0 and max_iter >= 1");

  const double successes = kernels::sum(X.y());
  if (successes == 0.0 || successes == static_cast<double>(n))
    throw NonIdentifiable("response has a single class (" + std::to_string(static_cast<long long>(successes)) +
                          " of " + std::to_string(n) + " are 1); the model is not identified");
  if (n <= params)
    throw InputError("fit: need more observations (" + std::to_string(n) + ") than parameters (" +
                     std::to_string(params) + ")");
  for (std::size_t j = 1; j < params; ++j) {
    const auto col = X.column(j);
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col[0]; }))
      throw CollinearityError("collinear design: column " + X.names()[j] + " is constant (duplicates the intercept)",
                              {X.names()[j]});
  }

  LogitFit out;
  out.names = X.names();
  out.n_obs = n;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params));
  auto span_of = [](const Eigen::VectorXd& v) { return std::span<const double>(v.data(), static_cast<std::size_t>(v.size())); };

  double ll = log_likelihood(span_of(beta), X);
  out.ll_trace.push_back(ll);
  double prev_max = 0.0;
  bool growing = false;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const auto p = predict_prob(X, span_of(beta));
    const Eigen::VectorXd g = gradient(span_of(beta), X);
    const InformationSolver solver(weighted_gram(X, weights(p)), X.names());
    const Eigen::VectorXd delta = solver.solve(g);

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double ll_candidate = ll;
    // Near the optimum the true gain falls below the rounding error of the
    // log-likelihood sum; a full step that loses no more than that is kept.
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(ll));
    for (int h = 0; h <= kMaxHalvings; ++h) {
      candidate = beta + step * delta;
      ll_candidate = log_likelihood(span_of(candidate), X);
      if (std::isfinite(ll_candidate) && ll_candidate >= ll - (h == 0 ? noise : 0.0)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No ascent left at working precision: beta is the maximizer.
      out.converged = true;
      break;
    }
    const double change = ll_candidate - ll;
    const double moved = step * max_abs(delta);
    beta = candidate;
    ll = ll_candidate;
    out.n_iter = iter;
    out.ll_trace.push_back(ll);

    const double now_max = max_abs(beta);
    growing = now_max > prev_max;
    prev_max = now_max;

    // Both the objective and the iterate must have settled; on separated data
    // the objective flattens while the coefficients keep marching outward.
    if (std::fabs(change) < options.tol && moved < 1e-6 * std::max(1.0, now_max)) {
      out.converged = true;
      break;
    }
  }

  if (!out.converged && max_abs(beta) > kSeparationBound && growing)
    throw PerfectSeparation("perfect separation: coefficients diverge (max |beta| = " +
                            std::to_string(max_abs(beta)) + " after " + std::to_string(out.n_iter) +
                            " iterations); some combination of predictors classifies the response exactly");

  out.beta = beta;
  out.ll = ll;
  const InformationSolver final_solver(information(span_of(beta), X), X.names());
  out.cov = final_solver.inverse();
  out.std_err = out.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  out.z = out.beta.cwiseQuotient(out.std_err);
  out.p = Eigen::VectorXd(out.z.size());
  for (Eigen::Index j = 0; j < out.z.size(); ++j) out.p(j) = special::normal_two_sided_p(out.z(j));

  if (params == 1) {
    out.ll0 = out.ll;  // the fitted model is the null model
  } else {
    const double ybar = successes / static_cast<double>(n);
    out.ll0 = successes * std::log(ybar) + (static_cast<double>(n) - successes) * std::log1p(-ybar);
  }
  return out;
}

int classify_threshold(double p, double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw InputError("cutoff must lie in (0, 1)");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("probability must lie in [0, 1]");
  return p >= cutoff ? 1 : 0;
}

LrTest lr_test(const LogitFit& fit) {
  LrTest t;
  t.df = static_cast<int>(fit.predictors());
  t.chi2 = std::max(0.0, 2.0 * (fit.ll - fit.ll0));
  t.p = t.df > 0 ? special::chi2_upper_tail(t.chi2, t.df) : 1.0;
  return t;
}

double pseudo_r2(const LogitFit& fit) {
  if (fit.ll0 == 0.0) throw InputError("pseudo R2 undefined: null log-likelihood is 0");
  return 1.0 - fit.ll / fit.ll0;
}

}  // namespace sentreg::logit
