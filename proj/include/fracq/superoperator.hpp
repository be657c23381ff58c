#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracq/operator_space.hpp"

namespace fracq {

/// X -> U (E o (U^dagger X U)) U^dagger: a superoperator that is diagonal on
/// the operator basis u_i u_j^dagger with eigenvalue E(i, j).
struct SpectralForm {
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd e;
};

/// Linear map on operators, held as a lazy expression tree. Dense d^2 x d^2
/// matrices use column-major vectorization, vec(L X R) = (R^T kron L) vec X.
class Superoperator {
 public:
  static constexpr int kDenseCap = 64;

  enum class Kind { identity, lplus, lminus, spectral, dense, diagonal_map, compose, sum };

  static Superoperator identity(const ContextPtr& ctx);
  static Superoperator from_dense(const ContextPtr& ctx, Eigen::MatrixXcd m);
  static Superoperator spectral(const ContextPtr& ctx, SpectralForm form);
  /// X -> diag(M diag(X)); everything off the diagonal is annihilated.
  static Superoperator diagonal_map(const ContextPtr& ctx, Eigen::MatrixXcd m);

  Kind kind() const;
  const ContextPtr& context() const;
  int dim() const { return context()->dim(); }

  DenseOperator apply(const DenseOperator& x) const;
  DenseOperator operator()(const DenseOperator& x) const { return apply(x); }

  /// Materialized d^2 x d^2 matrix. Throws dimension_cap when d > cap.
  Eigen::MatrixXcd dense(int cap = kDenseCap) const;

  /// Spectral form when the map is known to be diagonal in an operator basis
  /// (identity, L^+_A and L^-_A for Hermitian A, spectral nodes, scalings).
  std::optional<SpectralForm> spectral_form() const;

  const std::vector<std::string>& warnings() const;
  Superoperator with_warning(std::string w) const;

  friend Superoperator compose(const Superoperator& outer, const Superoperator& inner);
  friend Superoperator operator+(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator-(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator*(cplx s, const Superoperator& a);

  friend Superoperator lplus(const DenseOperator& a);
  friend Superoperator lminus(const DenseOperator& a);

  struct Node;

 private:
  explicit Superoperator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// L^+_A X = (A X + X A) / 2.
Superoperator lplus(const DenseOperator& a);
/// L^-_A X = (A X - X A) / (i hbar).
Superoperator lminus(const DenseOperator& a);
/// D_Q = -L^-_P and D_P = +L^-_Q, the derivations acting as d/dQ and d/dP.
Superoperator derivation(const ContextPtr& ctx, Axis axis);

struct FracPowOptions {
  bool tolerant_branch = false;  ///< allow eigenvalues on the negative real axis
  double cond_limit = 1e8;       ///< eigenvector condition number guard
  int dense_cap = Superoperator::kDenseCap;
};

/// S^mu = V Lambda^mu V^{-1} on the principal branch. Zero eigenvalues map to
/// 0 for mu > 0; mu = 0 gives the identity.
Superoperator superop_fracpow(const Superoperator& s, double mu, const FracPowOptions& opts = {});

}  // namespace fracq
