#include "sentreg/kernels.hpp"

namespace sentreg::kernels {

namespace {

// Lane l holds elements l, l+8, l+16, ...; lanes fold as (l + l+4), then a
// balanced tree over the four partial sums. The SIMD variants mirror this.
double fold(const double (&lanes)[kLanes]) {
  const double v0 = lanes[0] + lanes[4];
  const double v1 = lanes[1] + lanes[5];
  const double v2 = lanes[2] + lanes[6];
  const double v3 = lanes[3] + lanes[7];
  return (v0 + v1) + (v2 + v3);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lanes[kLanes] = {};
  for (std::size_t i = 0; i < n; ++i) lanes[i % kLanes] += a[i] * b[i];
  return fold(lanes);
}

double wdot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double lanes[kLanes] = {};
  for (std::size_t i = 0; i < n; ++i) lanes[i % kLanes] += (w[i] * a[i]) * b[i];
  return fold(lanes);
}

double sum_scalar(const double* a, std::size_t n) {
  double lanes[kLanes] = {};
  for (std::size_t i = 0; i < n; ++i) lanes[i % kLanes] += a[i];
  return fold(lanes);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalar{dot_scalar, wdot_scalar, sum_scalar, axpy_scalar};

}  // namespace

const KernelTable* scalar_table() { return &kScalar; }

}  // namespace sentreg::kernels
