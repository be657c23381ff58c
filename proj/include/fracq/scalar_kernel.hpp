#pragma once

#include <complex>

namespace fracq {

using cplx = std::complex<double>;

/// Fractional order alpha >= 0 together with its integer ceiling and the
/// truncation policy used by every infinite series in the library.
class FracOrder {
 public:
  static constexpr int kDefaultCutoff = 25;
  static constexpr double kDefaultTailTol = 1e-8;

  explicit FracOrder(double alpha, int series_cutoff = kDefaultCutoff,
                     double tail_tol = kDefaultTailTol);

  double alpha() const { return alpha_; }
  /// Smallest integer >= alpha (0 iff alpha == 0).
  int ceiling() const { return m_; }
  int series_cutoff() const { return cutoff_; }
  double tail_tol() const { return tail_tol_; }
  bool is_integer() const { return static_cast<double>(m_) == alpha_; }

  FracOrder with_cutoff(int cutoff) const { return FracOrder(alpha_, cutoff, tail_tol_); }

 private:
  double alpha_;
  int m_;
  int cutoff_;
  double tail_tol_;
};

/// sin(pi x) and cos(pi x) with exact zeros and units at integers and
/// half-integers.
double sin_pi(double x);
double cos_pi(double x);

/// Gamma function on the real line. Throws Error(pole) at 0, -1, -2, ...
double gamma(double z);

/// 1/Gamma(z); exactly 0 at the poles of Gamma.
double recip_gamma(double z);

/// Coefficient a(n, alpha) of the analytic-function series of the
/// Riemann-Liouville derivative:
///   Gamma(alpha+1) / [Gamma(n+1) Gamma(alpha-n+1) Gamma(n-alpha+1)].
/// Integer orders give exact zeros for n != alpha and exactly 1 for n == alpha.
double series_coeff(int n, const FracOrder& order);
double series_coeff(int n, double alpha);

/// z^mu on the principal branch (cut along the negative real axis,
/// Re z^mu > 0 for Re z > 0). Values on the cut use arg z = +pi.
class BranchedPower {
 public:
  explicit BranchedPower(double exponent) : exponent_(exponent) {}

  double exponent() const { return exponent_; }
  cplx operator()(cplx z) const;

 private:
  double exponent_;
};

/// The Fourier multiplier (i a)^alpha = |a|^alpha exp(i pi alpha sgn(a) / 2).
/// Returns 0 at a == 0 for alpha > 0 and 1 for alpha == 0.
cplx complex_power_ia(double a, double alpha);

}  // namespace fracq
