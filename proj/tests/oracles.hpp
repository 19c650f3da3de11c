#pragma once

// Independent reference computations written straight from the definitions,
// shared by the unit tests and the acceptance binary.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sentreg/logit.hpp"
#include "support.hpp"

namespace testing {

/// Bernoulli log-pmf summed row by row.
inline double brute_ll(const sentreg::logit::DesignMatrix& X, std::span<const double> beta) {
  double ll = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double eta = 0;
    for (std::size_t j = 0; j < X.cols(); ++j) eta += X.at(i, j) * beta[j];
    const double p = 1.0 / (1.0 + std::exp(-eta));
    ll += X.y()[i] == 1.0 ? std::log(p) : std::log(1.0 - p);
  }
  return ll;
}

/// Covariates drawn from {0, 1, 2} so that patterns repeat.
inline Synthetic grouped(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Synthetic s;
  s.columns.assign(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) s.names.push_back("g" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    double eta = -0.2;
    for (std::size_t j = 0; j < k; ++j) {
      s.columns[j][i] = static_cast<double>(rng() % 3);
      eta += 0.4 * (j % 2 ? -1 : 1) * s.columns[j][i];
    }
    s.y.push_back(u(rng) < logistic_ref(eta) ? 1.0 : 0.0);
  }
  return s;
}

/// O(N^2) grouping: each row joins the first earlier row with an identical vector.
inline std::vector<std::vector<std::size_t>> brute_partition(const sentreg::logit::DesignMatrix& X) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> owner(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    std::size_t found = SIZE_MAX;
    for (std::size_t r = 0; r < i && found == SIZE_MAX; ++r) {
      bool same = true;
      for (std::size_t j = 1; j < X.cols(); ++j) same = same && X.at(i, j) == X.at(r, j);
      if (same) found = owner[r];
    }
    if (found == SIZE_MAX) {
      owner[i] = groups.size();
      groups.push_back({i});
    } else {
      owner[i] = found;
      groups[found].push_back(i);
    }
  }
  return groups;
}

inline double brute_pearson(const sentreg::logit::DesignMatrix& X, std::span<const double> beta) {
  double chi2 = 0;
  for (const auto& g : brute_partition(X)) {
    double eta = 0;
    for (std::size_t j = 0; j < X.cols(); ++j) eta += X.at(g[0], j) * beta[j];
    const double p = logistic_ref(eta);
    double ys = 0;
    for (auto i : g) ys += X.y()[i];
    const double m = static_cast<double>(g.size());
    chi2 += (ys - m * p) * (ys - m * p) / (m * p * (1 - p));
  }
  return chi2;
}

inline double mean_prob(const sentreg::logit::DesignMatrix& X, std::span<const double> beta) {
  double s = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double eta = 0;
    for (std::size_t j = 0; j < X.cols(); ++j) eta += X.at(i, j) * beta[j];
    s += logistic_ref(eta);
  }
  return s / static_cast<double>(X.rows());
}

/// Central difference of mean P when every value in column j shifts by t.
inline double shifted_mean_prob_slope(const sentreg::logit::DesignMatrix& X, std::span<const double> beta,
                                      std::size_t j, double h = 1e-5) {
  std::vector<double> up(X.column(j).begin(), X.column(j).end()), down = up;
  for (auto& v : up) v += h;
  for (auto& v : down) v -= h;
  return (mean_prob(X.with_column(j, up), beta) - mean_prob(X.with_column(j, down), beta)) / (2 * h);
}

/// Average of P(x_j = 1) - P(x_j = 0) over rows.
inline double counterfactual_change(const sentreg::logit::DesignMatrix& X, std::span<const double> beta,
                                    std::size_t j) {
  return mean_prob(X.with_column(j, std::vector<double>(X.rows(), 1.0)), beta) -
         mean_prob(X.with_column(j, std::vector<double>(X.rows(), 0.0)), beta);
}

}  // namespace testing
