#pragma once

#include <complex>
#include <cstddef>

namespace fracq::fft {

using cplx = std::complex<double>;

/// Unnormalized in-place DFT of `howmany` interleaved transforms of length n.
/// Element j of transform t lives at data[t * dist + j * stride].
/// sign = -1 computes sum_j x_j e^{-2 pi i jk/n}; sign = +1 the conjugate kernel.
void transform(cplx* data, int n, int howmany, int stride, int dist, int sign);

inline void forward(cplx* data, int n) { transform(data, n, 1, 1, n, -1); }
inline void inverse(cplx* data, int n) { transform(data, n, 1, 1, n, +1); }

/// Row-major rows x cols array: transform every row (length cols) or every
/// column (length rows).
inline void along_rows(cplx* data, int rows, int cols, int sign) {
  transform(data, cols, rows, 1, cols, sign);
}
inline void along_cols(cplx* data, int rows, int cols, int sign) {
  transform(data, rows, cols, cols, 1, sign);
}

/// Signed DFT index of bin k for length n: 0..n/2-1, then -n/2..-1.
/// The Nyquist bin k = n/2 maps to -n/2.
inline int signed_index(int k, int n) { return k < n / 2 ? k : k - n; }

}  // namespace fracq::fft
