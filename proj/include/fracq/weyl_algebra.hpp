#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "fracq/scalar_kernel.hpp"

namespace fracq {

/// Classical polynomial sum c_{nm} q^n p^m.
class PhasePolynomial {
 public:
  using Key = std::pair<int, int>;  // (n, m)

  PhasePolynomial() = default;
  explicit PhasePolynomial(std::map<Key, cplx> terms);

  static PhasePolynomial monomial(int n, int m, cplx c = 1.0);
  /// Parses sums of products such as "q*p", "1 - 0.5*q^2*p", "3p^2".
  static PhasePolynomial parse(std::string_view text);

  const std::map<Key, cplx>& terms() const { return terms_; }
  int degree() const;
  cplx evaluate(double q, double p) const;
  bool is_real() const;

  PhasePolynomial d_dq() const;
  PhasePolynomial d_dp() const;

  PhasePolynomial operator+(const PhasePolynomial& o) const;
  PhasePolynomial operator*(cplx s) const;

  std::string to_string() const;

 private:
  std::map<Key, cplx> terms_;
};

/// Operator polynomial in standard (Q-left, P-right) order, sum c_{nm} Q^n P^m,
/// with [Q, P] = i hbar applied exactly during multiplication.
class OrderedPolynomial {
 public:
  using Key = std::pair<int, int>;

  explicit OrderedPolynomial(double hbar) : hbar_(hbar) {}
  OrderedPolynomial(double hbar, std::map<Key, cplx> terms);

  static OrderedPolynomial q(double hbar) { return OrderedPolynomial(hbar, {{{1, 0}, 1.0}}); }
  static OrderedPolynomial p(double hbar) { return OrderedPolynomial(hbar, {{{0, 1}, 1.0}}); }
  static OrderedPolynomial one(double hbar) { return OrderedPolynomial(hbar, {{{0, 0}, 1.0}}); }

  double hbar() const { return hbar_; }
  const std::map<Key, cplx>& terms() const { return terms_; }

  OrderedPolynomial operator+(const OrderedPolynomial& o) const;
  OrderedPolynomial operator-(const OrderedPolynomial& o) const;
  OrderedPolynomial operator*(const OrderedPolynomial& o) const;
  OrderedPolynomial operator*(cplx s) const;

  /// Largest coefficient magnitude of this minus o.
  double max_abs_diff(const OrderedPolynomial& o) const;

 private:
  double hbar_;
  std::map<Key, cplx> terms_;
};

/// (X Y + Y X) / 2 and (X Y - Y X) / (i hbar) in the ordered algebra.
OrderedPolynomial sym_lplus(const OrderedPolynomial& x, const OrderedPolynomial& y);
OrderedPolynomial sym_lminus(const OrderedPolynomial& x, const OrderedPolynomial& y);

/// Weyl symmetrization: q^n p^m -> (L^+_Q)^n P^m, extended linearly.
OrderedPolynomial weyl_symbolic(const PhasePolynomial& a, double hbar);

}  // namespace fracq
