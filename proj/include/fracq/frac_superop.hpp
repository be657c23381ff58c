#pragma once

#include <string>
#include <vector>

#include "fracq/operator_space.hpp"
#include "fracq/superoperator.hpp"
#include "fracq/weyl_quantize.hpp"

namespace fracq {

/// How the derivation series sum_n a(n, alpha) (L^+_X)^{n-alpha} D_X^n is evaluated.
///   exact:      symbolic monomials in X.
///   matrix:     dense matrices with D_Q = -L^-_P, D_P = +L^-_Q built from the
///               truncated canonical pair.
///   subalgebra: dense matrices on the commutative algebra of X, with D_X
///               restricted to the invariant subspace of polynomials in X of
///               degree <= d/4 (where it acts exactly as d/dX).
enum class SeriesPath { exact, matrix, subalgebra };

struct FracSuperopSpec {
  Axis axis;
  FracOrder order;
  SeriesPath path;
  ContextPtr ctx;  ///< required by the matrix paths
};

struct SeriesDiagnostics {
  int terms_used = 0;
  double last_term_norm = 0.0;   ///< max-norm of the last retained nonzero term
  double tail_change = 0.0;      ///< relative change when N+5 terms are used
  bool natural_termination = false;
  double projection_residual = 0.0;  ///< subalgebra path only
  std::vector<std::string> warnings;
};

template <class T>
struct SeriesResult {
  T value;
  SeriesDiagnostics diagnostics;
};

SeriesResult<QMonomial> rl_superop_apply(const FracSuperopSpec& spec, const QMonomial& a);
SeriesResult<DenseOperator> rl_superop_apply(const FracSuperopSpec& spec, const DenseOperator& a);

/// Dense d^2 x d^2 realization of the truncated series (d <= 64).
Superoperator rl_superop_matrix(const FracSuperopSpec& spec);

/// Weyl quantization of D_q^alpha D_p^beta A through the weight (ia)^alpha (ib)^beta.
DenseOperator liouville_superop_apply(double alpha, double beta, const PhaseFunction2D& symbol,
                                      const ContextPtr& ctx);

/// Fractional power of D_Q or D_P. The spectrum is purely imaginary with a
/// kernel, so the tolerant branch rule is used and 0 maps to 0.
Superoperator dqp_fracpow(Axis axis, double alpha, const ContextPtr& ctx);

/// -(1/m) L^+_P D_Q + m omega^2 L^+_Q D_P.
Superoperator oscillator_generator(double mass, double omega, const ContextPtr& ctx);
/// P^2 / (2m) + m omega^2 Q^2 / 2.
DenseOperator oscillator_hamiltonian(double mass, double omega, const ContextPtr& ctx);

/// Legendre-Vandermonde restriction of d/dX to polynomials of degree <= K on
/// the context grid: returns the d x d matrix V N^n V^+ for n = power.
Eigen::MatrixXd subalgebra_derivative_power(const OperatorContext& ctx, int degree, int power);

}  // namespace fracq
