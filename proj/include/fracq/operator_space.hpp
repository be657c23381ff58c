#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "fracq/classical_frac.hpp"
#include "fracq/scalar_kernel.hpp"

namespace fracq {

enum class Axis { Q, P };

/// Which canonical variable is diagonal in the working basis.
///   position:          Q = diag(grid), P = DFT momentum.
///   momentum_positive: P = diag(grid), Q = -(DFT momentum), so the
///                      momentum spectrum is strictly positive.
enum class Representation { position, momentum_positive };

class OperatorContext;
using ContextPtr = std::shared_ptr<const OperatorContext>;

class OperatorContext {
 public:
  /// Uniform grid x_i = (i+1) b / d on (0, b].
  static ContextPtr uniform(int d, double b, double hbar,
                            Representation rep = Representation::position);
  /// Uniform grid with b = sqrt(2 pi d hbar), which gives equal position and
  /// momentum resolution.
  static ContextPtr balanced(int d, double hbar, Representation rep = Representation::position);
  /// Arbitrary strictly increasing positive grid.
  static ContextPtr from_grid(std::vector<double> grid, double hbar,
                              Representation rep = Representation::position);

  int dim() const { return static_cast<int>(grid_.size()); }
  double hbar() const { return hbar_; }
  const Eigen::VectorXd& grid() const { return grid_; }
  double b() const { return grid_[grid_.size() - 1]; }
  bool is_uniform() const { return uniform_; }
  /// Grid spacing; only meaningful for uniform grids.
  double spacing() const { return spacing_; }
  Representation representation() const { return rep_; }
  Axis diagonal_axis() const { return rep_ == Representation::position ? Axis::Q : Axis::P; }
  int safe_margin() const { return safe_margin_; }

  OperatorContext(std::vector<double> grid, double hbar, Representation rep);

 private:
  Eigen::VectorXd grid_;
  double hbar_;
  Representation rep_;
  bool uniform_ = false;
  double spacing_ = 0.0;
  int safe_margin_ = 0;
};

class DenseOperator {
 public:
  DenseOperator(ContextPtr ctx, Eigen::MatrixXcd m);

  static DenseOperator identity(const ContextPtr& ctx);
  static DenseOperator zero(const ContextPtr& ctx);
  static DenseOperator diagonal(const ContextPtr& ctx, const Eigen::VectorXcd& diag);

  const ContextPtr& context() const { return ctx_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::MatrixXcd& matrix() { return m_; }

  DenseOperator adjoint() const { return DenseOperator(ctx_, m_.adjoint()); }
  double max_abs() const;
  bool is_diagonal(double rel_tol = 1e-12) const;
  bool is_hermitian(double rel_tol = 1e-12) const;

  DenseOperator operator+(const DenseOperator& o) const;
  DenseOperator operator-(const DenseOperator& o) const;
  DenseOperator operator*(const DenseOperator& o) const;
  DenseOperator operator*(cplx s) const { return DenseOperator(ctx_, m_ * s); }

 private:
  ContextPtr ctx_;
  Eigen::MatrixXcd m_;
};

/// Max-norm of A - B divided by the max-norm of B (absolute when B = 0).
double rel_max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// hbar U^dagger diag(k) U with U the unitary DFT on the grid and k the
/// signed wavenumbers 2 pi s / (d h), Nyquist bin negative. Exactly Hermitian.
Eigen::MatrixXcd dft_momentum(const OperatorContext& ctx);

DenseOperator build_q(const ContextPtr& ctx);
DenseOperator build_p(const ContextPtr& ctx);
DenseOperator build_axis(const ContextPtr& ctx, Axis axis);

/// Exact symbolic operator sum_k c_k X^{mu_k} in one canonical variable X.
/// Real (also negative) exponents are allowed: X is positive definite
/// wherever these are realized as matrices.
class QMonomial {
 public:
  QMonomial(Axis variable, GenPolynomial poly) : variable_(variable), poly_(std::move(poly)) {}
  static QMonomial power(Axis variable, double mu, cplx c = 1.0) {
    return QMonomial(variable, GenPolynomial::monomial(mu, c, variable == Axis::Q ? 'Q' : 'P'));
  }

  Axis variable() const { return variable_; }
  const GenPolynomial& poly() const { return poly_; }
  const std::vector<GenPolynomial::Term>& terms() const { return poly_.terms(); }
  cplx coeff(double mu) const { return poly_.coeff(mu); }

  QMonomial operator+(const QMonomial& o) const;
  QMonomial operator*(cplx s) const { return QMonomial(variable_, poly_ * s); }

 private:
  Axis variable_;
  GenPolynomial poly_;
};

/// (L^+_X)^mu on the commutative algebra of X: c X^nu -> c X^{nu+mu}.
QMonomial qmono_apply_lplus_pow(const QMonomial& x, double mu);
/// The derivation D_X acting as d/dX: c X^mu -> c mu X^{mu-1}.
QMonomial qmono_apply_deriv(const QMonomial& x);
/// Diagonal realization on a context whose diagonal axis is the variable.
DenseOperator qmono_to_matrix(const QMonomial& x, const ContextPtr& ctx);

/// Weak comparison of X and Y on Gaussian packets localized inside the safe
/// block. Canonical commutation identities cannot hold entrywise in finite
/// dimension (tr [Q, P] = 0), but they do hold on states that keep away from
/// the grid edges and the momentum cutoff.
struct ProbeOptions {
  double sigma = 0.0;                ///< packet width; 0 selects sqrt(hbar)
  std::vector<double> wavenumbers;   ///< empty selects {0, +-1/sqrt(hbar)}
  int margin = -1;                   ///< rows skipped at each edge; -1 uses the context
  double reference_scale = 0.0;      ///< lower bound on the denominator
};

struct ProbeResult {
  double max_rel_error = 0.0;
  int packets = 0;
};

ProbeResult safe_block_probe(const DenseOperator& x, const DenseOperator& y,
                             const ProbeOptions& opts = {});

}  // namespace fracq
