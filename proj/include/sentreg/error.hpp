#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sentreg {

// Each error family maps onto one CLI exit code.
enum class ErrorKind {
  Input = 2,       // bad values, schema mismatches, malformed files
  Estimation = 3,  // the model cannot be estimated on this data
  Io = 4,          // missing files, unwritable outputs
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what) : Error(ErrorKind::Estimation, what) {}
};

/// The response has a single class, so no slope or intercept is identified.
class NonIdentifiable : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

/// The information matrix is rank deficient; `columns` names the columns that
/// fell below the pivot tolerance.
class CollinearityError : public EstimationError {
 public:
  CollinearityError(const std::string& what, std::vector<std::string> columns)
      : EstimationError(what), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

/// Coefficients diverge because some linear combination of the predictors
/// classifies the response exactly.
class PerfectSeparation : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

}  // namespace sentreg
