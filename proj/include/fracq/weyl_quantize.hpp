#pragma once

#include "fracq/classical_frac.hpp"
#include "fracq/operator_space.hpp"
#include "fracq/weyl_algebra.hpp"

namespace fracq {

/// Weight F(a, b) applied to the symplectic Fourier coefficients of a symbol
/// before the operator kernel is assembled.
class QuantizerWeight {
 public:
  enum class Kind { weyl, rivier, frac_multiplier };

  static QuantizerWeight weyl() { return QuantizerWeight(Kind::weyl, 0.0, 0.0); }
  static QuantizerWeight rivier() { return QuantizerWeight(Kind::rivier, 0.0, 0.0); }
  /// F = (i a)^alpha (i b)^beta, alpha, beta >= 0.
  static QuantizerWeight frac_multiplier(double alpha, double beta);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  cplx operator()(double a, double b, double hbar) const;

 private:
  QuantizerWeight(Kind kind, double alpha, double beta) : kind_(kind), alpha_(alpha), beta_(beta) {}
  Kind kind_;
  double alpha_;
  double beta_;
};

/// Average of every ordering of n copies of Q and m copies of P for each term q^n p^m.
/// Degree guard: n + m <= d / 4 for every term.
DenseOperator weyl_poly(const PhasePolynomial& a, const ContextPtr& ctx);

/// pmax = pi hbar d / b: the momentum range dual to the position grid.
double aligned_pmax(const OperatorContext& ctx);

/// Samples a symbol on the phase grid aligned with a uniform position-basis
/// context: nq in {d, 2d} rows over (0, b], np = d momentum columns.
template <class F>
PhaseFunction2D sample_symbol(const OperatorContext& ctx, int nq, F&& f) {
  return PhaseFunction2D::sample(ctx.b(), aligned_pmax(ctx), nq, ctx.dim(), ctx.hbar(),
                                 std::forward<F>(f));
}

/// Discrete F-quantization. With S(k, .) the (weighted) symbol at the pair
/// midpoint (x_i + x_j)/2, k = i + j, the kernel is
///   K(i, j) = G(k, (i - j) mod d),  G(k, s) = (1/d) sum_j S(k, p_j) e^{i p_j s h / hbar}.
/// nq = 2d samples the midpoints exactly; nq = d is upsampled spectrally.
DenseOperator f_quantize_grid(const PhaseFunction2D& a, const QuantizerWeight& w,
                              const ContextPtr& ctx);

/// Inverse of the Weyl (F = 1) kernel map. Returns a symbol with nq = 2d,
/// np = d. Kernel samples that no matrix entry reaches are filled by cubic
/// interpolation along the midpoint index.
PhaseFunction2D dequantize_weyl(const DenseOperator& a);

}  // namespace fracq
