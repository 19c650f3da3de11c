#include "sentreg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sentreg::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return avx2_table() != nullptr && cpu_has_avx2();
    case Isa::Neon: return neon_table() != nullptr;  // baseline on AArch64
  }
  return false;
}

Isa detect() {
  if (const char* env = std::getenv("SENTREG_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
      if (want == to_string(isa) && supported(isa)) return isa;
  }
  if (supported(Isa::Avx2)) return Isa::Avx2;
  if (supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active() { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!supported(isa)) throw std::invalid_argument("kernel variant not supported here: " + std::string(to_string(isa)));
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      if (const auto* t = avx2_table()) return *t;
      break;
    case Isa::Neon:
      if (const auto* t = neon_table()) return *t;
      break;
    case Isa::Scalar:
      break;
  }
  return *scalar_table();
}

}  // namespace sentreg::kernels
