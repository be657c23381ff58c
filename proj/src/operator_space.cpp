#include "fracq/operator_space.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracq/error.hpp"
#include "fracq/fft.hpp"

namespace fracq {

OperatorContext::OperatorContext(std::vector<double> grid, double hbar, Representation rep)
    : hbar_(hbar), rep_(rep) {
  require(grid.size() >= 2, ErrorCode::invalid_argument, "operator dimension must be >= 2");
  require(std::isfinite(hbar) && hbar > 0.0, ErrorCode::invalid_argument, "hbar must be > 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]) && grid[i] > 0.0, ErrorCode::invalid_argument,
            "grid points must be finite and strictly positive");
    if (i > 0) {
      require(grid[i] > grid[i - 1], ErrorCode::invalid_argument,
              "grid points must be strictly increasing");
    }
  }
  const int d = static_cast<int>(grid.size());
  grid_ = Eigen::Map<const Eigen::VectorXd>(grid.data(), d);
  const double h = (grid.back() - grid.front()) / (d - 1);
  uniform_ = true;
  for (int i = 1; i < d; ++i) {
    if (std::abs(grid[static_cast<std::size_t>(i)] - grid[static_cast<std::size_t>(i - 1)] - h) >
        1e-9 * h) {
      uniform_ = false;
      break;
    }
  }
  spacing_ = uniform_ ? h : 0.0;
  safe_margin_ = d / 8;
}

ContextPtr OperatorContext::uniform(int d, double b, double hbar, Representation rep) {
  require(d >= 2, ErrorCode::invalid_argument, "operator dimension must be >= 2");
  require(std::isfinite(b) && b > 0.0, ErrorCode::invalid_argument, "grid length b must be > 0");
  std::vector<double> g(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i)] = (i + 1) * b / d;
  auto ctx = std::make_shared<OperatorContext>(std::move(g), hbar, rep);
  ctx->spacing_ = b / d;
  ctx->uniform_ = true;
  return ctx;
}

ContextPtr OperatorContext::balanced(int d, double hbar, Representation rep) {
  require(std::isfinite(hbar) && hbar > 0.0, ErrorCode::invalid_argument, "hbar must be > 0");
  return uniform(d, std::sqrt(2.0 * std::numbers::pi * d * hbar), hbar, rep);
}

ContextPtr OperatorContext::from_grid(std::vector<double> grid, double hbar, Representation rep) {
  return std::make_shared<OperatorContext>(std::move(grid), hbar, rep);
}

DenseOperator::DenseOperator(ContextPtr ctx, Eigen::MatrixXcd m) : ctx_(std::move(ctx)), m_(std::move(m)) {
  require(ctx_ != nullptr, ErrorCode::invalid_argument, "operator needs a context");
  require(m_.rows() == ctx_->dim() && m_.cols() == ctx_->dim(), ErrorCode::grid_mismatch,
          "operator shape does not match context dimension");
  require(m_.allFinite(), ErrorCode::invalid_argument, "operator entries must be finite");
}

DenseOperator DenseOperator::identity(const ContextPtr& ctx) {
  return DenseOperator(ctx, Eigen::MatrixXcd::Identity(ctx->dim(), ctx->dim()));
}

DenseOperator DenseOperator::zero(const ContextPtr& ctx) {
  return DenseOperator(ctx, Eigen::MatrixXcd::Zero(ctx->dim(), ctx->dim()));
}

DenseOperator DenseOperator::diagonal(const ContextPtr& ctx, const Eigen::VectorXcd& diag) {
  require(diag.size() == ctx->dim(), ErrorCode::grid_mismatch, "diagonal length mismatch");
  return DenseOperator(ctx, diag.asDiagonal().toDenseMatrix());
}

double DenseOperator::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

bool DenseOperator::is_diagonal(double rel_tol) const {
  Eigen::MatrixXcd off = m_;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= rel_tol * std::max(1.0, max_abs());
}

bool DenseOperator::is_hermitian(double rel_tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * std::max(1.0, max_abs());
}

namespace {
void check_same_space(const DenseOperator& a, const DenseOperator& b) {
  require(a.dim() == b.dim() && a.context()->hbar() == b.context()->hbar(),
          ErrorCode::grid_mismatch, "operators live on different spaces");
}
}  // namespace

DenseOperator DenseOperator::operator+(const DenseOperator& o) const {
  check_same_space(*this, o);
  return DenseOperator(ctx_, m_ + o.m_);
}

DenseOperator DenseOperator::operator-(const DenseOperator& o) const {
  check_same_space(*this, o);
  return DenseOperator(ctx_, m_ - o.m_);
}

DenseOperator DenseOperator::operator*(const DenseOperator& o) const {
  check_same_space(*this, o);
  return DenseOperator(ctx_, m_ * o.m_);
}

double rel_max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::grid_mismatch,
          "matrix shapes differ");
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double ref = b.cwiseAbs().maxCoeff();
  return ref > 0.0 ? diff / ref : diff;
}

Eigen::MatrixXcd dft_momentum(const OperatorContext& ctx) {
  require(ctx.is_uniform(), ErrorCode::invalid_argument,
          "the DFT momentum operator needs a uniform grid");
  const int d = ctx.dim();
  const double period = d * ctx.spacing();
  // The matrix is circulant: P_ij = c((i - j) mod d), c = inverse DFT of hbar k.
  std::vector<cplx> c(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) {
    c[static_cast<std::size_t>(s)] =
        ctx.hbar() * 2.0 * std::numbers::pi * fft::signed_index(s, d) / period;
  }
  fft::inverse(c.data(), d);
  Eigen::MatrixXcd p(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      p(i, j) = c[static_cast<std::size_t>(((i - j) % d + d) % d)] / static_cast<double>(d);
    }
  }
  return 0.5 * (p + p.adjoint());
}

DenseOperator build_q(const ContextPtr& ctx) {
  if (ctx->representation() == Representation::position) {
    return DenseOperator::diagonal(ctx, ctx->grid().cast<cplx>());
  }
  return DenseOperator(ctx, -dft_momentum(*ctx));
}

DenseOperator build_p(const ContextPtr& ctx) {
  if (ctx->representation() == Representation::position) {
    return DenseOperator(ctx, dft_momentum(*ctx));
  }
  return DenseOperator::diagonal(ctx, ctx->grid().cast<cplx>());
}

DenseOperator build_axis(const ContextPtr& ctx, Axis axis) {
  return axis == Axis::Q ? build_q(ctx) : build_p(ctx);
}

QMonomial QMonomial::operator+(const QMonomial& o) const {
  require(variable_ == o.variable_, ErrorCode::invalid_argument,
          "cannot add monomials in different variables");
  return QMonomial(variable_, poly_ + o.poly_);
}

QMonomial qmono_apply_lplus_pow(const QMonomial& x, double mu) {
  require(std::isfinite(mu), ErrorCode::invalid_argument, "power must be finite");
  std::vector<GenPolynomial::Term> out;
  for (const auto& t : x.terms()) out.push_back({t.mu + mu, t.c});
  return QMonomial(x.variable(), GenPolynomial(std::move(out), x.poly().variable()));
}

QMonomial qmono_apply_deriv(const QMonomial& x) {
  std::vector<GenPolynomial::Term> out;
  for (const auto& t : x.terms()) {
    if (t.mu != 0.0) out.push_back({t.mu - 1.0, t.c * t.mu});
  }
  return QMonomial(x.variable(), GenPolynomial(std::move(out), x.poly().variable()));
}

DenseOperator qmono_to_matrix(const QMonomial& x, const ContextPtr& ctx) {
  require(ctx->diagonal_axis() == x.variable(), ErrorCode::invalid_argument,
          "monomial variable is not diagonal in this context");
  const int d = ctx->dim();
  Eigen::VectorXcd diag(d);
  for (int i = 0; i < d; ++i) diag[i] = x.poly().evaluate(ctx->grid()[i]);
  return DenseOperator::diagonal(ctx, diag);
}

ProbeResult safe_block_probe(const DenseOperator& x, const DenseOperator& y,
                             const ProbeOptions& opts) {
  check_same_space(x, y);
  const auto& ctx = *x.context();
  const int d = ctx.dim();
  const double sigma = opts.sigma > 0.0 ? opts.sigma : std::sqrt(ctx.hbar());
  std::vector<double> ks = opts.wavenumbers;
  if (ks.empty()) {
    const double k = 1.0 / std::sqrt(ctx.hbar());
    ks = {0.0, k, -k};
  }
  const int margin = opts.margin >= 0 ? opts.margin : ctx.safe_margin();
  require(2 * margin < d, ErrorCode::invalid_argument, "probe margin leaves no rows");

  ProbeResult res;
  const Eigen::MatrixXcd diff = x.matrix() - y.matrix();
  for (int center : {d / 2, 3 * d / 8, 5 * d / 8}) {
    const double xc = ctx.grid()[center];
    for (double k0 : ks) {
      Eigen::VectorXcd psi(d);
      for (int i = 0; i < d; ++i) {
        const double u = ctx.grid()[i] - xc;
        psi[i] = std::exp(-u * u / (2.0 * sigma * sigma)) * std::polar(1.0, k0 * ctx.grid()[i]);
      }
      const Eigen::VectorXcd err = diff * psi;
      const Eigen::VectorXcd ref = y.matrix() * psi;
      const double denom = std::max(ref.cwiseAbs().maxCoeff(), opts.reference_scale);
      const double num = err.segment(margin, d - 2 * margin).cwiseAbs().maxCoeff();
      res.max_rel_error = std::max(res.max_rel_error, denom > 0.0 ? num / denom : num);
      ++res.packets;
    }
  }
  return res;
}

}  // namespace fracq
