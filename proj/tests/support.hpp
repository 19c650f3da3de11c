#pragma once

// Shared fixtures for the test binaries: seeded synthetic data and scratch
// directories.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sentreg/logit.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return SENTREG_DATA_DIR; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sentreg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double logistic_ref(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

struct Synthetic {
  std::vector<std::vector<double>> columns;
  std::vector<double> y;
  std::vector<std::string> names;
};

/// Standard normal predictors; y ~ Bernoulli(logistic(beta[0] + sum beta[j] x_j)).
inline Synthetic simulate_logit(std::size_t n, const std::vector<double>& beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Synthetic s;
  const std::size_t k = beta.size() - 1;
  s.columns.assign(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) s.names.push_back("x" + std::to_string(j + 1));
  for (std::size_t i = 0; i < n; ++i) {
    double eta = beta[0];
    for (std::size_t j = 0; j < k; ++j) {
      s.columns[j][i] = z(rng);
      eta += beta[j + 1] * s.columns[j][i];
    }
    s.y.push_back(u(rng) < logistic_ref(eta) ? 1.0 : 0.0);
  }
  return s;
}

inline sentreg::logit::DesignMatrix design(const Synthetic& s) { return {s.names, s.columns, s.y}; }

/// The 2x2 table: x=0 has 10 ones and 10 zeros, x=1 has 15 ones and 5 zeros.
inline sentreg::logit::DesignMatrix two_by_two() {
  std::vector<double> x, y;
  auto add = [&](double xv, int ones, int zeros) {
    for (int i = 0; i < ones; ++i) x.push_back(xv), y.push_back(1);
    for (int i = 0; i < zeros; ++i) x.push_back(xv), y.push_back(0);
  };
  add(0, 10, 10);
  add(1, 15, 5);
  return {{"x"}, {x}, y};
}

}  // namespace testing
