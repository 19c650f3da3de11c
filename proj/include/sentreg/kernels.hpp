#pragma once

// Reduction and update kernels behind the estimator's O(N*k) loops.
//
// Every reduction accumulates element i into lane (i % kLanes) and combines
// the lanes in a fixed tree, so the scalar reference and each SIMD variant
// produce bit-identical results. Which variant runs is a speed choice only.

#include <cstddef>
#include <span>
#include <string_view>

namespace sentreg::kernels {

inline constexpr std::size_t kLanes = 8;

enum class Isa { Scalar, Avx2, Neon };
std::string_view to_string(Isa isa);

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (w[i] * a[i]) * b[i]
  double (*wdot)(const double* w, const double* a, const double* b, std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

bool supported(Isa isa);
/// Best supported variant, unless SENTREG_ISA=scalar|avx2|neon overrides it.
Isa detect();
Isa active();
/// Throws std::invalid_argument if `isa` is not supported on this CPU/build.
void set_active(Isa isa);
const KernelTable& table(Isa isa);

// Per-ISA tables; unsupported ones are null.
const KernelTable* scalar_table();
const KernelTable* avx2_table();
const KernelTable* neon_table();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return table(active()).dot(a.data(), b.data(), a.size());
}
inline double wdot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return table(active()).wdot(w.data(), a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return table(active()).sum(a.data(), a.size()); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  table(active()).axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace sentreg::kernels
