#include "sentreg/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#include <arm_neon.h>
#define SENTREG_HAVE_NEON_KERNELS 1
#endif

namespace sentreg::kernels {

#ifdef SENTREG_HAVE_NEON_KERNELS

namespace {

// Four 2-wide accumulators cover lanes 0..7. vmulq/vaddq only, never vfmaq.
struct Acc {
  float64x2_t r[4];
};

double fold(const Acc& acc, std::size_t tail_begin, std::size_t n, const double* a, const double* b,
            const double* w) {
  double lanes[kLanes];
  for (int k = 0; k < 4; ++k) vst1q_f64(lanes + 2 * k, acc.r[k]);
  for (std::size_t i = tail_begin; i < n; ++i) {
    double term = a[i];
    if (w) term = w[i] * term;
    if (b) term = term * b[i];
    lanes[i % kLanes] += term;
  }
  const double v0 = lanes[0] + lanes[4];
  const double v1 = lanes[1] + lanes[5];
  const double v2 = lanes[2] + lanes[6];
  const double v3 = lanes[3] + lanes[7];
  return (v0 + v1) + (v2 + v3);
}

Acc zero() {
  Acc acc;
  for (auto& r : acc.r) r = vdupq_n_f64(0.0);
  return acc;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  Acc acc = zero();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (int k = 0; k < 4; ++k)
      acc.r[k] = vaddq_f64(acc.r[k], vmulq_f64(vld1q_f64(a + i + 2 * k), vld1q_f64(b + i + 2 * k)));
  return fold(acc, i, n, a, b, nullptr);
}

double wdot_neon(const double* w, const double* a, const double* b, std::size_t n) {
  Acc acc = zero();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (int k = 0; k < 4; ++k) {
      const float64x2_t wa = vmulq_f64(vld1q_f64(w + i + 2 * k), vld1q_f64(a + i + 2 * k));
      acc.r[k] = vaddq_f64(acc.r[k], vmulq_f64(wa, vld1q_f64(b + i + 2 * k)));
    }
  return fold(acc, i, n, a, b, w);
}

double sum_neon(const double* a, std::size_t n) {
  Acc acc = zero();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (int k = 0; k < 4; ++k) acc.r[k] = vaddq_f64(acc.r[k], vld1q_f64(a + i + 2 * k));
  return fold(acc, i, n, a, nullptr, nullptr);
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kNeon{dot_neon, wdot_neon, sum_neon, axpy_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace sentreg::kernels
