#pragma once

#include <vector>

#include "fracq/scalar_kernel.hpp"

namespace fracq {

/// Finite sum of real powers sum_k c_k x^{mu_k}. Terms are kept sorted by
/// exponent, merged and free of zero coefficients. Negative exponents are
/// permitted because fractional derivatives of low-degree terms produce them.
class GenPolynomial {
 public:
  struct Term {
    double mu;
    cplx c;
  };

  GenPolynomial() = default;
  explicit GenPolynomial(std::vector<Term> terms, char variable = 'x');

  static GenPolynomial monomial(double mu, cplx c = 1.0, char variable = 'x');

  const std::vector<Term>& terms() const { return terms_; }
  char variable() const { return variable_; }
  bool empty() const { return terms_.empty(); }
  bool has_integer_exponents() const;
  double max_exponent() const;

  cplx evaluate(double x) const;
  /// Coefficient of x^mu, 0 when absent.
  cplx coeff(double mu) const;

  GenPolynomial operator+(const GenPolynomial& other) const;
  GenPolynomial operator*(cplx s) const;

 private:
  std::vector<Term> terms_;
  char variable_ = 'x';
};

/// Uniform, left-closed samples of a complex function on [x0, x1).
class GridFunction1D {
 public:
  GridFunction1D(double x0, double x1, std::vector<cplx> values);

  template <class F>
  static GridFunction1D sample(double x0, double x1, int n, F&& f) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    const double h = (x1 - x0) / n;
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = f(x0 + i * h);
    return GridFunction1D(x0, x1, std::move(v));
  }

  double x0() const { return x0_; }
  double x1() const { return x1_; }
  int size() const { return static_cast<int>(values_.size()); }
  double spacing() const { return (x1_ - x0_) / size(); }
  double x(int i) const { return x0_ + i * spacing(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

 private:
  double x0_;
  double x1_;
  std::vector<cplx> values_;
};

/// Samples of A(q, p) on q_i = (i+1) b / nq (i = 0..nq-1) and
/// p_j = -pmax + 2 pmax j / np (j = 0..np-1), stored row-major by q.
class PhaseFunction2D {
 public:
  PhaseFunction2D(double b, double pmax, int nq, int np, double hbar, std::vector<cplx> values);

  template <class F>
  static PhaseFunction2D sample(double b, double pmax, int nq, int np, double hbar, F&& f) {
    std::vector<cplx> v(static_cast<std::size_t>(nq) * static_cast<std::size_t>(np));
    for (int i = 0; i < nq; ++i) {
      const double q = (i + 1) * b / nq;
      for (int j = 0; j < np; ++j) {
        v[static_cast<std::size_t>(i) * np + j] = f(q, -pmax + 2.0 * pmax * j / np);
      }
    }
    return PhaseFunction2D(b, pmax, nq, np, hbar, std::move(v));
  }

  double b() const { return b_; }
  double pmax() const { return pmax_; }
  int nq() const { return nq_; }
  int np() const { return np_; }
  double hbar() const { return hbar_; }
  double q(int i) const { return (i + 1) * b_ / nq_; }
  double p(int j) const { return -pmax_ + 2.0 * pmax_ * j / np_; }
  cplx operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * np_ + j]; }
  cplx& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * np_ + j]; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }

 private:
  double b_;
  double pmax_;
  int nq_;
  int np_;
  double hbar_;
  std::vector<cplx> values_;
};

/// Gamma(mu+1)/Gamma(mu+1-alpha) x^{mu-alpha}; empty when the ratio vanishes.
GenPolynomial rl_monomial(double mu, const FracOrder& order, cplx c = 1.0);

/// Terminating series sum_n a(n, alpha) x^{n-alpha} d^n p / dx^n for
/// polynomials with non-negative integer exponents.
GenPolynomial rl_series_poly(const GenPolynomial& p, const FracOrder& order);

/// Grunwald-Letnikov sum h^{-alpha} sum_j (-1)^j binom(alpha, j) f(x - j h).
GridFunction1D gl_oracle(const GridFunction1D& f, const FracOrder& order);

struct OracleValue {
  cplx value;
  int nominal_order;
};

/// Product-integration quadrature of the weakly singular Riemann-Liouville
/// integral (piecewise-linear f, exact kernel moments) followed by a central
/// finite difference of order floor(alpha)+1.
OracleValue rl_integral_oracle(const GridFunction1D& f, const FracOrder& order, double x);

/// Fourier-multiplier derivative: mode a_k = 2 pi k / (x1 - x0) is scaled by
/// (i a_k)^alpha.
GridFunction1D liouville_fft(const GridFunction1D& f, double alpha);

/// Mixed derivative D_q^alpha D_p^beta with frequencies a = hbar k_q and
/// b = hbar k_p.
PhaseFunction2D frac_partial_phase(const PhaseFunction2D& A, double alpha, double beta);

}  // namespace fracq
