#pragma once

// Data-parallel inner loops shared by the spectral, quadrature and
// superoperator code. Every kernel has a scalar reference implementation and
// an AVX2/FMA variant; the variant is chosen once at runtime from CPUID and
// can be pinned with the FRACQ_SIMD environment variable ("scalar", "avx2").

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fracq::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // x[i] *= w[i]
  void (*cmul_inplace)(cplx* x, const cplx* w, std::size_t n);
  // x[i] *= w[i], w real
  void (*scale_real_inplace)(cplx* x, const double* w, std::size_t n);
  // sum_i w[i] * f[i], w real
  cplx (*dot_real_complex)(const double* w, const cplx* f, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
};

bool isa_available(Isa isa);
std::vector<Isa> available_isas();

/// Kernel table for a specific instruction set. Throws if unavailable.
const KernelTable& table(Isa isa);

/// Currently selected kernel table.
const KernelTable& active();
Isa active_isa();

/// Pin the dispatch to a given instruction set (tests and benchmarks).
void set_active_isa(Isa isa);

inline void cmul_inplace(std::span<cplx> x, std::span<const cplx> w) {
  active().cmul_inplace(x.data(), w.data(), x.size());
}
inline void scale_real_inplace(std::span<cplx> x, std::span<const double> w) {
  active().scale_real_inplace(x.data(), w.data(), x.size());
}
inline cplx dot_real_complex(std::span<const double> w, std::span<const cplx> f) {
  return active().dot_real_complex(w.data(), f.data(), f.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(FRACQ_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace fracq::simd
