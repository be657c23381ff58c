#include "fracq/simd/kernels.hpp"

namespace fracq::simd::detail {

namespace {

// Complex products are spelled out so the reference path never goes through
// the NaN-recovering library multiply.
void cmul_inplace(cplx* x, const cplx* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double wr = w[i].real(), wi = w[i].imag();
    x[i] = cplx(xr * wr - xi * wi, xr * wi + xi * wr);
  }
}

void scale_real_inplace(cplx* x, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = cplx(x[i].real() * w[i], x[i].imag() * w[i]);
  }
}

cplx dot_real_complex(const double* w, const cplx* f, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += w[i] * f[i].real();
    im += w[i] * f[i].imag();
  }
  return {re, im};
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

}  // namespace

const KernelTable kScalarTable = {Isa::scalar, cmul_inplace, scale_real_inplace,
                                  dot_real_complex, axpy};

}  // namespace fracq::simd::detail
