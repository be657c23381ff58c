#include "fracq/superoperator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <mutex>
#include <string>

#include "fracq/error.hpp"
#include "fracq/simd/kernels.hpp"

namespace fracq {

struct Superoperator::Node {
  Kind kind = Kind::identity;
  ContextPtr ctx;
  Eigen::MatrixXcd a;  // operand (lplus/lminus), matrix (dense, diagonal_map)
  bool a_real_diagonal = false;
  SpectralForm spec;   // spectral nodes
  bool spec_u_identity = false;
  std::vector<std::pair<cplx, Superoperator>> children;  // sum terms, or {outer, inner}
  std::vector<std::string> warnings;

  mutable std::once_flag spectral_once;
  mutable std::optional<SpectralForm> spectral_cache;
};

namespace {

using Node = Superoperator::Node;

bool exactly_real_diagonal(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == j ? m(i, j).imag() != 0.0 : m(i, j) != cplx(0.0, 0.0)) return false;
    }
  }
  return true;
}

bool is_identity(const Eigen::MatrixXcd& u) {
  return u.rows() == u.cols() && u == Eigen::MatrixXcd::Identity(u.rows(), u.cols());
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void hadamard_inplace(Eigen::MatrixXcd& x, const Eigen::MatrixXcd& e) {
  simd::active().cmul_inplace(x.data(), e.data(), static_cast<std::size_t>(x.size()));
}

// Eigen-decomposition of a Hermitian operand, exact for real diagonal input.
void hermitian_eigen(const Eigen::MatrixXcd& a, bool real_diag, Eigen::MatrixXcd& u,
                     Eigen::VectorXd& lambda) {
  const Eigen::Index d = a.rows();
  if (real_diag) {
    u = Eigen::MatrixXcd::Identity(d, d);
    lambda = a.diagonal().real();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  require(es.info() == Eigen::Success, ErrorCode::ill_conditioned,
          "Hermitian eigendecomposition failed");
  u = es.eigenvectors();
  lambda = es.eigenvalues();
}

std::shared_ptr<Node> make_node(Superoperator::Kind kind, ContextPtr ctx) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->ctx = std::move(ctx);
  return n;
}

}  // namespace

Superoperator::Kind Superoperator::kind() const { return node_->kind; }
const ContextPtr& Superoperator::context() const { return node_->ctx; }
const std::vector<std::string>& Superoperator::warnings() const { return node_->warnings; }

Superoperator Superoperator::identity(const ContextPtr& ctx) {
  return Superoperator(make_node(Kind::identity, ctx));
}

Superoperator Superoperator::from_dense(const ContextPtr& ctx, Eigen::MatrixXcd m) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(ctx->dim()) * ctx->dim();
  require(m.rows() == d2 && m.cols() == d2, ErrorCode::grid_mismatch,
          "dense superoperator must be d^2 x d^2");
  auto n = make_node(Kind::dense, ctx);
  n->a = std::move(m);
  return Superoperator(n);
}

Superoperator Superoperator::spectral(const ContextPtr& ctx, SpectralForm form) {
  const int d = ctx->dim();
  require(form.u.rows() == d && form.u.cols() == d && form.e.rows() == d && form.e.cols() == d,
          ErrorCode::grid_mismatch, "spectral form shape mismatch");
  auto n = make_node(Kind::spectral, ctx);
  n->spec_u_identity = is_identity(form.u);
  n->spec = std::move(form);
  return Superoperator(n);
}

Superoperator Superoperator::diagonal_map(const ContextPtr& ctx, Eigen::MatrixXcd m) {
  require(m.rows() == ctx->dim() && m.cols() == ctx->dim(), ErrorCode::grid_mismatch,
          "diagonal map must be d x d");
  auto n = make_node(Kind::diagonal_map, ctx);
  n->a = std::move(m);
  return Superoperator(n);
}

Superoperator lplus(const DenseOperator& a) {
  auto n = make_node(Superoperator::Kind::lplus, a.context());
  n->a = a.matrix();
  n->a_real_diagonal = exactly_real_diagonal(n->a);
  return Superoperator(n);
}

Superoperator lminus(const DenseOperator& a) {
  auto n = make_node(Superoperator::Kind::lminus, a.context());
  n->a = a.matrix();
  n->a_real_diagonal = exactly_real_diagonal(n->a);
  return Superoperator(n);
}

Superoperator derivation(const ContextPtr& ctx, Axis axis) {
  if (axis == Axis::Q) return cplx(-1.0) * lminus(build_p(ctx));
  return lminus(build_q(ctx));
}

Superoperator compose(const Superoperator& outer, const Superoperator& inner) {
  require(outer.dim() == inner.dim(), ErrorCode::grid_mismatch,
          "cannot compose superoperators of different dimension");
  auto n = make_node(Superoperator::Kind::compose, outer.context());
  n->children = {{1.0, outer}, {1.0, inner}};
  n->warnings = outer.warnings();
  n->warnings.insert(n->warnings.end(), inner.warnings().begin(), inner.warnings().end());
  return Superoperator(n);
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  require(a.dim() == b.dim(), ErrorCode::grid_mismatch,
          "cannot add superoperators of different dimension");
  auto n = make_node(Superoperator::Kind::sum, a.context());
  n->children = {{1.0, a}, {1.0, b}};
  n->warnings = a.warnings();
  n->warnings.insert(n->warnings.end(), b.warnings().begin(), b.warnings().end());
  return Superoperator(n);
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
  return a + cplx(-1.0) * b;
}

Superoperator operator*(cplx s, const Superoperator& a) {
  auto n = make_node(Superoperator::Kind::sum, a.context());
  n->children = {{s, a}};
  n->warnings = a.warnings();
  return Superoperator(n);
}

Superoperator Superoperator::with_warning(std::string w) const {
  auto n = std::make_shared<Node>();
  n->kind = node_->kind;
  n->ctx = node_->ctx;
  n->a = node_->a;
  n->a_real_diagonal = node_->a_real_diagonal;
  n->spec = node_->spec;
  n->spec_u_identity = node_->spec_u_identity;
  n->children = node_->children;
  n->warnings = node_->warnings;
  n->warnings.push_back(std::move(w));
  return Superoperator(n);
}

DenseOperator Superoperator::apply(const DenseOperator& x) const {
  require(x.dim() == dim(), ErrorCode::grid_mismatch, "operator dimension mismatch");
  const Node& n = *node_;
  const Eigen::MatrixXcd& xm = x.matrix();
  switch (n.kind) {
    case Kind::identity:
      return DenseOperator(n.ctx, xm);
    case Kind::lplus: {
      if (n.a_real_diagonal) {
        Eigen::MatrixXcd out = xm;
        const Eigen::VectorXcd a = n.a.diagonal();
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
          for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) *= 0.5 * (a[i] + a[j]);
        }
        return DenseOperator(n.ctx, std::move(out));
      }
      return DenseOperator(n.ctx, 0.5 * (n.a * xm + xm * n.a));
    }
    case Kind::lminus: {
      const cplx inv(0.0, -1.0 / n.ctx->hbar());  // 1/(i hbar)
      if (n.a_real_diagonal) {
        Eigen::MatrixXcd out = xm;
        const Eigen::VectorXcd a = n.a.diagonal();
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
          for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) *= inv * (a[i] - a[j]);
        }
        return DenseOperator(n.ctx, std::move(out));
      }
      return DenseOperator(n.ctx, inv * (n.a * xm - xm * n.a));
    }
    case Kind::spectral: {
      if (n.spec_u_identity) {
        Eigen::MatrixXcd out = xm;
        hadamard_inplace(out, n.spec.e);
        return DenseOperator(n.ctx, std::move(out));
      }
      Eigen::MatrixXcd t = n.spec.u.adjoint() * xm * n.spec.u;
      hadamard_inplace(t, n.spec.e);
      return DenseOperator(n.ctx, n.spec.u * t * n.spec.u.adjoint());
    }
    case Kind::dense: {
      const Eigen::Index d = xm.rows();
      Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(xm.data(), d * d);
      Eigen::VectorXcd r = n.a * v;
      return DenseOperator(n.ctx, Eigen::Map<Eigen::MatrixXcd>(r.data(), d, d));
    }
    case Kind::diagonal_map: {
      const Eigen::VectorXcd diag = n.a * xm.diagonal();
      return DenseOperator::diagonal(n.ctx, diag);
    }
    case Kind::compose:
      return n.children[0].second.apply(n.children[1].second.apply(x));
    case Kind::sum: {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(xm.rows(), xm.cols());
      for (const auto& [c, child] : n.children) acc += c * child.apply(x).matrix();
      return DenseOperator(n.ctx, std::move(acc));
    }
  }
  fail(ErrorCode::invalid_argument, "unknown superoperator kind");
}

Eigen::MatrixXcd Superoperator::dense(int cap) const {
  const Node& n = *node_;
  const int d = dim();
  require(d <= cap, ErrorCode::dimension_cap,
          "dense superoperator needs d <= " + std::to_string(cap) + ", got " + std::to_string(d));
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  switch (n.kind) {
    case Kind::identity:
      return Eigen::MatrixXcd::Identity(d2, d2);
    case Kind::lplus:
      return 0.5 * (kron(id, n.a) + kron(n.a.transpose(), id));
    case Kind::lminus:
      return cplx(0.0, -1.0 / n.ctx->hbar()) * (kron(id, n.a) - kron(n.a.transpose(), id));
    case Kind::spectral: {
      const Eigen::VectorXcd ev = Eigen::Map<const Eigen::VectorXcd>(n.spec.e.data(), d2);
      if (n.spec_u_identity) return ev.asDiagonal().toDenseMatrix();
      const Eigen::MatrixXcd w = kron(n.spec.u.conjugate(), n.spec.u);
      return w * ev.asDiagonal() * w.adjoint();
    }
    case Kind::dense:
      return n.a;
    case Kind::diagonal_map: {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d2, d2);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) out(i + static_cast<Eigen::Index>(i) * d, j + static_cast<Eigen::Index>(j) * d) = n.a(i, j);
      }
      return out;
    }
    case Kind::compose:
      return n.children[0].second.dense(cap) * n.children[1].second.dense(cap);
    case Kind::sum: {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d2, d2);
      for (const auto& [c, child] : n.children) acc += c * child.dense(cap);
      return acc;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown superoperator kind");
}

std::optional<SpectralForm> Superoperator::spectral_form() const {
  const Node& n = *node_;
  std::call_once(n.spectral_once, [&n]() {
    const int d = n.ctx->dim();
    switch (n.kind) {
      case Kind::identity:
        n.spectral_cache = SpectralForm{Eigen::MatrixXcd::Identity(d, d), Eigen::MatrixXcd::Ones(d, d)};
        break;
      case Kind::lplus:
      case Kind::lminus: {
        const double scale = std::max(1.0, n.a.cwiseAbs().maxCoeff());
        if ((n.a - n.a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) break;
        Eigen::MatrixXcd u;
        Eigen::VectorXd lam;
        hermitian_eigen(n.a, n.a_real_diagonal, u, lam);
        Eigen::MatrixXcd e(d, d);
        const cplx inv(0.0, -1.0 / n.ctx->hbar());
        for (int j = 0; j < d; ++j) {
          for (int i = 0; i < d; ++i) {
            e(i, j) = n.kind == Kind::lplus ? cplx(0.5 * (lam[i] + lam[j])) : inv * (lam[i] - lam[j]);
          }
        }
        n.spectral_cache = SpectralForm{std::move(u), std::move(e)};
        break;
      }
      case Kind::spectral:
        n.spectral_cache = n.spec;
        break;
      case Kind::sum:
        if (n.children.size() == 1) {
          auto inner = n.children[0].second.spectral_form();
          if (inner) {
            inner->e *= n.children[0].first;
            n.spectral_cache = std::move(inner);
          }
        }
        break;
      default:
        break;
    }
  });
  return n.spectral_cache;
}

namespace {

struct PowerContext {
  double mu;
  double zero_tol;
  bool tolerant;
  bool hit_cut = false;
};

cplx eigen_power(cplx lambda, PowerContext& pc) {
  const double mag = std::abs(lambda);
  if (mag <= pc.zero_tol) {
    if (pc.mu > 0.0) return 0.0;
    fail(ErrorCode::singular_power, "negative power of a superoperator with a zero eigenvalue");
  }
  if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= 1e-10 * mag) {
    if (!pc.tolerant) {
      fail(ErrorCode::branch_cut, "eigenvalue on the negative real axis: " +
                                      std::to_string(lambda.real()));
    }
    pc.hit_cut = true;
    return std::pow(mag, pc.mu) * cplx(cos_pi(pc.mu), sin_pi(pc.mu));
  }
  return BranchedPower(pc.mu)(lambda);
}

}  // namespace

Superoperator superop_fracpow(const Superoperator& s, double mu, const FracPowOptions& opts) {
  require(std::isfinite(mu), ErrorCode::invalid_argument, "power must be finite");
  const ContextPtr& ctx = s.context();
  if (mu == 0.0) return Superoperator::identity(ctx);
  if (mu == 1.0) return s;

  const char* cut_warning = "eigenvalue on the negative real axis mapped with arg = +pi";

  if (auto sf = s.spectral_form()) {
    const double scale = sf->e.cwiseAbs().maxCoeff();
    PowerContext pc{mu, 1e-12 * scale, opts.tolerant_branch};
    Eigen::MatrixXcd e(sf->e.rows(), sf->e.cols());
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      for (Eigen::Index i = 0; i < e.rows(); ++i) e(i, j) = eigen_power(sf->e(i, j), pc);
    }
    Superoperator out = Superoperator::spectral(ctx, SpectralForm{sf->u, std::move(e)});
    return pc.hit_cut ? out.with_warning(cut_warning) : out;
  }

  const Eigen::MatrixXcd m = s.dense(opts.dense_cap);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m);
  require(schur.info() == Eigen::Success, ErrorCode::ill_conditioned, "Schur decomposition failed");
  const Eigen::MatrixXcd& t = schur.matrixT();
  const double tscale = std::max(1e-300, t.cwiseAbs().maxCoeff());
  Eigen::MatrixXcd strict = t.triangularView<Eigen::StrictlyUpper>();

  Eigen::MatrixXcd v;
  Eigen::MatrixXcd vinv;
  Eigen::VectorXcd lambda;
  if (strict.cwiseAbs().maxCoeff() <= 1e-10 * tscale) {
    // Normal matrix: the Schur basis is an orthonormal eigenbasis.
    v = schur.matrixU();
    vinv = v.adjoint();
    lambda = t.diagonal();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    require(es.info() == Eigen::Success, ErrorCode::ill_conditioned, "eigendecomposition failed");
    v = es.eigenvectors();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(v);
    const auto& sv = svd.singularValues();
    const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                : std::numeric_limits<double>::infinity();
    require(cond <= opts.cond_limit, ErrorCode::ill_conditioned,
            "eigenvector matrix condition number " + std::to_string(cond) + " exceeds limit");
    vinv = v.partialPivLu().inverse();
    lambda = es.eigenvalues();
  }
  PowerContext pc{mu, 1e-12 * lambda.cwiseAbs().maxCoeff(), opts.tolerant_branch};
  Eigen::VectorXcd lp(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lp[i] = eigen_power(lambda[i], pc);
  Superoperator out = Superoperator::from_dense(ctx, v * lp.asDiagonal() * vinv);
  return pc.hit_cut ? out.with_warning(cut_warning) : out;
}

}  // namespace fracq
