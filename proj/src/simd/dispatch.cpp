#include <atomic>
#include <cstdlib>
#include <string>

#include "fracq/error.hpp"
#include "fracq/simd/kernels.hpp"

namespace fracq::simd {

namespace {

bool cpu_has_avx2() {
#if defined(FRACQ_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  const char* env = std::getenv("FRACQ_SIMD");
  if (env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return &detail::kScalarTable;
#if defined(FRACQ_HAVE_AVX2_KERNELS)
    if (want == "avx2" && cpu_has_avx2()) return &detail::kAvx2Table;
#endif
  }
#if defined(FRACQ_HAVE_AVX2_KERNELS)
  if (cpu_has_avx2()) return &detail::kAvx2Table;
#endif
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (isa_available(Isa::avx2)) out.push_back(Isa::avx2);
  return out;
}

const KernelTable& table(Isa isa) {
  require(isa_available(isa), ErrorCode::invalid_argument,
          "instruction set not available: " + std::string(to_string(isa)));
#if defined(FRACQ_HAVE_AVX2_KERNELS)
  if (isa == Isa::avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

Isa active_isa() { return active().isa; }

void set_active_isa(Isa isa) { slot().store(&table(isa), std::memory_order_relaxed); }

}  // namespace fracq::simd
