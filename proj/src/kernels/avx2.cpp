#include "sentreg/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SENTREG_HAVE_AVX2_KERNELS 1
#endif

namespace sentreg::kernels {

#ifdef SENTREG_HAVE_AVX2_KERNELS

namespace {

// Two 4-wide accumulators cover lanes 0..3 and 4..7. No FMA: the products
// must round exactly as in the scalar reference.
#define SENTREG_AVX2 __attribute__((target("avx2")))

SENTREG_AVX2 double fold(__m256d lo, __m256d hi, std::size_t tail_begin, std::size_t n,
                         const double* a, const double* b, const double* w) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, lo);
  _mm256_store_pd(lanes + 4, hi);
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

SENTREG_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  return fold(lo, hi, i, n, a, b, nullptr);
}

SENTREG_AVX2 double wdot_avx2(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    const __m256d wa1 = _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4));
    lo = _mm256_add_pd(lo, _mm256_mul_pd(wa0, _mm256_loadu_pd(b + i)));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(wa1, _mm256_loadu_pd(b + i + 4)));
  }
  return fold(lo, hi, i, n, a, b, w);
}

SENTREG_AVX2 double sum_avx2(const double* a, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    lo = _mm256_add_pd(lo, _mm256_loadu_pd(a + i));
    hi = _mm256_add_pd(hi, _mm256_loadu_pd(a + i + 4));
  }
  return fold(lo, hi, i, n, a, nullptr, nullptr);
}

SENTREG_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

#undef SENTREG_AVX2

constexpr KernelTable kAvx2{dot_avx2, wdot_avx2, sum_avx2, axpy_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace sentreg::kernels
