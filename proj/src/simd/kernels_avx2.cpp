// Compiled with -mavx2 -mfma. Only reached after the dispatcher has checked
// CPUID, so nothing here may run at static-initialization time.

#include <immintrin.h>

#include "fracq/simd/kernels.hpp"

namespace fracq::simd::detail {

namespace {

// Two complex<double> per 256-bit register, interleaved [re0 im0 re1 im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul2(__m256d x, __m256d w) {
  const __m256d wr = _mm256_movedup_pd(w);        // wr0 wr0 wr1 wr1
  const __m256d wi = _mm256_permute_pd(w, 0xF);   // wi0 wi0 wi1 wi1
  const __m256d xs = _mm256_permute_pd(x, 0x5);   // xi0 xr0 xi1 xr1
  return _mm256_fmaddsub_pd(x, wr, _mm256_mul_pd(xs, wi));
}

void cmul_inplace(cplx* x, const cplx* w, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, cmul2(load2(x + i), load2(w + i)));
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double wr = w[i].real(), wi = w[i].imag();
    x[i] = cplx(xr * wr - xi * wi, xr * wi + xi * wr);
  }
}

inline __m256d dup_real2(const double* w) {
  const __m128d pair = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(pair), 0x50);  // w0 w0 w1 w1
}

void scale_real_inplace(cplx* x, const double* w, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, _mm256_mul_pd(load2(x + i), dup_real2(w + i)));
  for (; i < n; ++i) x[i] = cplx(x[i].real() * w[i], x[i].imag() * w[i]);
}

cplx dot_real_complex(const double* w, const cplx* f, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(dup_real2(w + i), load2(f + i), acc0);
    acc1 = _mm256_fmadd_pd(dup_real2(w + i + 2), load2(f + i + 2), acc1);
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_fmadd_pd(dup_real2(w + i), load2(f + i), acc0);
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  const __m128d folded = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double re = _mm_cvtsd_f64(folded);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(folded, folded));
  for (; i < n; ++i) {
    re += w[i] * f[i].real();
    im += w[i] * f[i].imag();
  }
  return {re, im};
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(xs, ai));
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  const double re = a.real(), im = a.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (re * xr - im * xi), y[i].imag() + (re * xi + im * xr));
  }
}

}  // namespace

const KernelTable kAvx2Table = {Isa::avx2, cmul_inplace, scale_real_inplace, dot_real_complex,
                                axpy};

}  // namespace fracq::simd::detail
