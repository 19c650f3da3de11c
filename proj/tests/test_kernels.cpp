#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "sentreg/kernels.hpp"
#include "sentreg/logit.hpp"
#include "support.hpp"

using namespace sentreg::kernels;

namespace {

std::vector<Isa> simd_variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (supported(isa)) out.push_back(isa);
  return out;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

// The documented lane scheme, written out independently of the kernels.
double striped_sum(const std::vector<double>& terms) {
  double lane[kLanes] = {};
  for (std::size_t i = 0; i < terms.size(); ++i) lane[i % kLanes] += terms[i];
  double v[4];
  for (int k = 0; k < 4; ++k) v[k] = lane[k] + lane[k + 4];
  return (v[0] + v[1]) + (v[2] + v[3]);
}

}  // namespace

TEST_CASE("scalar kernels follow the striped lane order") {
  const auto& s = *scalar_table();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 1e3);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 1000u}) {
    std::vector<double> a(n), b(n), w(n), ab(n), wab(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = z(rng), b[i] = z(rng), w[i] = std::fabs(z(rng));
      ab[i] = a[i] * b[i];
      wab[i] = (w[i] * a[i]) * b[i];
    }
    CHECK(same_bits(s.sum(a.data(), n), striped_sum(a)));
    CHECK(same_bits(s.dot(a.data(), b.data(), n), striped_sum(ab)));
    CHECK(same_bits(s.wdot(w.data(), a.data(), b.data(), n), striped_sum(wab)));
  }
}

TEST_CASE("SIMD variants are bit-identical to the scalar reference") {
  const auto variants = simd_variants();
  if (variants.empty()) MESSAGE("no SIMD variant available on this machine; scalar only");
  const auto& ref = *scalar_table();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0.0, 1.0);
  for (Isa isa : variants) {
    const auto& t = table(isa);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = rng() % 300;
      const std::size_t offset = rng() % 4;  // exercise unaligned starts
      std::vector<double> a(n + offset), b(n + offset), w(n + offset);
      for (std::size_t i = 0; i < n + offset; ++i) {
        a[i] = z(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
        b[i] = z(rng);
        w[i] = std::fabs(z(rng));
      }
      const double *pa = a.data() + offset, *pb = b.data() + offset, *pw = w.data() + offset;
      CHECK(same_bits(t.sum(pa, n), ref.sum(pa, n)));
      CHECK(same_bits(t.dot(pa, pb, n), ref.dot(pa, pb, n)));
      CHECK(same_bits(t.wdot(pw, pa, pb, n), ref.wdot(pw, pa, pb, n)));
      std::vector<double> y1(b.begin() + offset, b.end()), y2 = y1;
      t.axpy(0.37, pa, y1.data(), n);
      ref.axpy(0.37, pa, y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(y1[i], y2[i]));
    }
  }
}

TEST_CASE("fit results do not depend on the active variant") {
  const auto data = testing::simulate_logit(2000, {0.2, 0.8, -0.5, 0.3}, 99);
  const auto X = testing::design(data);
  const Isa original = active();
  set_active(Isa::Scalar);
  const auto scalar_fit = sentreg::logit::fit(X);
  for (Isa isa : simd_variants()) {
    set_active(isa);
    const auto f = sentreg::logit::fit(X);
    for (Eigen::Index j = 0; j < f.beta.size(); ++j) CHECK(same_bits(f.beta(j), scalar_fit.beta(j)));
    CHECK(same_bits(f.ll, scalar_fit.ll));
  }
  set_active(original);
}

TEST_CASE("dispatch") {
  CHECK(supported(Isa::Scalar));
  CHECK(supported(detect()));
  CHECK(to_string(Isa::Avx2) == "avx2");
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (!supported(isa)) CHECK_THROWS_AS(set_active(isa), std::invalid_argument);
}
