#include "fracq/frac_superop.hpp"

#include <Eigen/QR>
#include <cmath>
#include <string>

#include "fracq/error.hpp"

namespace fracq {

namespace {

double coef_norm(const QMonomial& x) {
  double m = 0.0;
  for (const auto& t : x.terms()) m = std::max(m, std::abs(t.c));
  return m;
}

double coef_diff(const QMonomial& a, const QMonomial& b) {
  return coef_norm(a + b * cplx(-1.0));
}

void check_order_tail(SeriesDiagnostics& diag, const FracOrder& order) {
  if (diag.tail_change > order.tail_tol()) {
    diag.warnings.push_back("series not converged at N = " + std::to_string(order.series_cutoff()) +
                            ": relative change " + std::to_string(diag.tail_change) +
                            " with N+5 terms exceeds " + std::to_string(order.tail_tol()));
  }
}

// Legendre basis on t = 2x/b - 1 and the exact coefficient derivative map.
struct LegendreBasis {
  Eigen::MatrixXd v;   // d x (K+1)
  Eigen::MatrixXd n;   // (K+1) x (K+1), strictly upper triangular
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;

  LegendreBasis(const OperatorContext& ctx, int degree) {
    const int d = ctx.dim();
    const int k1 = degree + 1;
    const double b = ctx.b();
    v.resize(d, k1);
    for (int i = 0; i < d; ++i) {
      const double t = 2.0 * ctx.grid()[i] / b - 1.0;
      v(i, 0) = 1.0;
      if (k1 > 1) v(i, 1) = t;
      for (int j = 1; j + 1 < k1; ++j) v(i, j + 1) = ((2.0 * j + 1.0) * t * v(i, j) - j * v(i, j - 1)) / (j + 1.0);
    }
    n = Eigen::MatrixXd::Zero(k1, k1);
    for (int j = 0; j < k1; ++j) {
      for (int k = j - 1; k >= 0; k -= 2) n(k, j) = (2.0 / b) * (2.0 * k + 1.0);
    }
    qr.compute(v);
  }

  Eigen::VectorXcd coefficients(const Eigen::VectorXcd& f) const {
    const Eigen::VectorXd re = qr.solve(Eigen::VectorXd(f.real()));
    const Eigen::VectorXd im = qr.solve(Eigen::VectorXd(f.imag()));
    Eigen::VectorXcd c(re.size());
    for (Eigen::Index i = 0; i < re.size(); ++i) c[i] = cplx(re[i], im[i]);
    return c;
  }
};

int subalgebra_degree(const OperatorContext& ctx) { return std::max(1, ctx.dim() / 4); }

void require_context(const FracSuperopSpec& spec) {
  require(spec.ctx != nullptr, ErrorCode::invalid_argument, "matrix paths need an operator context");
}

void require_subalgebra_axis(const FracSuperopSpec& spec) {
  require(spec.ctx->diagonal_axis() == spec.axis, ErrorCode::invalid_argument,
          "subalgebra path needs the series axis to be diagonal in the context");
}

}  // namespace

Eigen::MatrixXd subalgebra_derivative_power(const OperatorContext& ctx, int degree, int power) {
  require(degree >= 1 && power >= 0, ErrorCode::invalid_argument, "invalid subalgebra request");
  LegendreBasis basis(ctx, degree);
  Eigen::MatrixXd pinv = basis.qr.solve(Eigen::MatrixXd::Identity(ctx.dim(), ctx.dim()));
  Eigen::MatrixXd np = Eigen::MatrixXd::Identity(degree + 1, degree + 1);
  for (int i = 0; i < power; ++i) np = basis.n * np;
  return basis.v * np * pinv;
}

SeriesResult<QMonomial> rl_superop_apply(const FracSuperopSpec& spec, const QMonomial& a) {
  require(spec.path == SeriesPath::exact, ErrorCode::invalid_argument,
          "symbolic input needs the exact path");
  require(a.variable() == spec.axis, ErrorCode::invalid_argument,
          "monomial variable does not match the series axis");
  const double alpha = spec.order.alpha();
  const int n_cut = spec.order.series_cutoff();
  SeriesDiagnostics diag;
  QMonomial r_n(a.variable(), GenPolynomial({}, a.poly().variable()));
  QMonomial r_full = r_n;
  QMonomial t = a;
  for (int n = 0; n <= n_cut + 5; ++n) {
    const double c = series_coeff(n, alpha);
    if (c != 0.0) {
      const QMonomial term = qmono_apply_lplus_pow(t, n - alpha) * c;
      if (n <= n_cut) {
        r_n = r_n + term;
        diag.terms_used = n + 1;
        diag.last_term_norm = coef_norm(term);
      }
      r_full = r_full + term;
    }
    if (spec.order.is_integer() && n >= spec.order.ceiling()) {
      diag.natural_termination = true;
      break;
    }
    t = qmono_apply_deriv(t);
    if (t.terms().empty()) {
      diag.natural_termination = true;
      break;
    }
  }
  const double ref = coef_norm(r_n);
  const double change = coef_diff(r_full, r_n);
  diag.tail_change = ref > 0.0 ? change / ref : change;
  check_order_tail(diag, spec.order);
  return {r_n, diag};
}

SeriesResult<DenseOperator> rl_superop_apply(const FracSuperopSpec& spec, const DenseOperator& a) {
  require(spec.path != SeriesPath::exact, ErrorCode::invalid_argument,
          "matrix input needs the matrix or subalgebra path");
  require_context(spec);
  require(a.dim() == spec.ctx->dim(), ErrorCode::grid_mismatch, "operator dimension mismatch");
  const auto& ctx = spec.ctx;
  const double alpha = spec.order.alpha();
  const int n_cut = spec.order.series_cutoff();
  const Superoperator lx = lplus(build_axis(ctx, spec.axis));
  SeriesDiagnostics diag;
  Eigen::MatrixXcd r_n = Eigen::MatrixXcd::Zero(a.dim(), a.dim());
  Eigen::MatrixXcd r_full = r_n;

  auto add_term = [&](int n, const DenseOperator& t) {
    const double c = series_coeff(n, alpha);
    if (c == 0.0) return;
    const Eigen::MatrixXcd term = c * superop_fracpow(lx, n - alpha).apply(t).matrix();
    if (n <= n_cut) {
      r_n += term;
      diag.terms_used = n + 1;
      diag.last_term_norm = term.cwiseAbs().maxCoeff();
    }
    r_full += term;
  };

  if (spec.path == SeriesPath::matrix) {
    const Superoperator dx = derivation(ctx, spec.axis);
    const double a_norm = a.max_abs();
    DenseOperator t = a;
    for (int n = 0; n <= n_cut + 5; ++n) {
      add_term(n, t);
      if (spec.order.is_integer() && n >= spec.order.ceiling()) {
        diag.natural_termination = true;
        break;
      }
      t = dx.apply(t);
      if (t.max_abs() <= 1e-14 * a_norm) {
        diag.natural_termination = true;
        break;
      }
    }
  } else {
    require_subalgebra_axis(spec);
    require(a.is_diagonal(1e-12), ErrorCode::invalid_argument,
            "subalgebra path needs an operator diagonal in the series axis");
    const int k_deg = subalgebra_degree(*ctx);
    const LegendreBasis basis(*ctx, k_deg);
    const Eigen::VectorXcd f = a.matrix().diagonal();
    Eigen::VectorXcd c = basis.coefficients(f);
    const Eigen::VectorXcd fit = basis.v.cast<cplx>() * c;
    const double f_norm = f.cwiseAbs().maxCoeff();
    diag.projection_residual = (fit - f).cwiseAbs().maxCoeff() / std::max(f_norm, 1e-300);
    if (diag.projection_residual > 1e-10) {
      diag.warnings.push_back("operator is not a polynomial of degree <= " + std::to_string(k_deg) +
                              " in the axis variable: projection residual " +
                              std::to_string(diag.projection_residual));
    }
    const Eigen::MatrixXcd nmat = basis.n.cast<cplx>();
    const int last = std::min(n_cut + 5, k_deg);
    for (int n = 0; n <= last; ++n) {
      add_term(n, DenseOperator::diagonal(ctx, basis.v.cast<cplx>() * c));
      if (spec.order.is_integer() && n >= spec.order.ceiling()) break;
      c = nmat * c;
    }
    diag.natural_termination = true;
  }

  const double ref = r_n.cwiseAbs().maxCoeff();
  const double change = (r_full - r_n).cwiseAbs().maxCoeff();
  diag.tail_change = ref > 0.0 ? change / ref : change;
  check_order_tail(diag, spec.order);
  return {DenseOperator(ctx, std::move(r_n)), diag};
}

Superoperator rl_superop_matrix(const FracSuperopSpec& spec) {
  require(spec.path != SeriesPath::exact, ErrorCode::invalid_argument,
          "the exact path has no matrix form");
  require_context(spec);
  const auto& ctx = spec.ctx;
  const int d = ctx->dim();
  require(d <= Superoperator::kDenseCap, ErrorCode::dimension_cap,
          "dense series needs d <= " + std::to_string(Superoperator::kDenseCap));
  const double alpha = spec.order.alpha();
  const int n_cut = spec.order.series_cutoff();
  const Superoperator lx = lplus(build_axis(ctx, spec.axis));
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;

  if (spec.path == SeriesPath::subalgebra) {
    require_subalgebra_axis(spec);
    const int k_deg = subalgebra_degree(*ctx);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n <= std::min(n_cut, k_deg); ++n) {
      const double c = series_coeff(n, alpha);
      if (c == 0.0) continue;
      const auto sf = superop_fracpow(lx, n - alpha).spectral_form();
      const Eigen::MatrixXcd m = subalgebra_derivative_power(*ctx, k_deg, n).cast<cplx>();
      acc += c * sf->e.diagonal().asDiagonal() * m;
    }
    return Superoperator::from_dense(ctx, Superoperator::diagonal_map(ctx, acc).dense());
  }

  const Eigen::MatrixXcd dd = derivation(ctx, spec.axis).dense();
  Eigen::MatrixXcd dn = Eigen::MatrixXcd::Identity(d2, d2);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d2, d2);
  double last_norm = 0.0;
  for (int n = 0; n <= n_cut; ++n) {
    const double c = series_coeff(n, alpha);
    if (c != 0.0) {
      const Eigen::MatrixXcd term = c * superop_fracpow(lx, n - alpha).dense() * dn;
      last_norm = term.cwiseAbs().maxCoeff();
      acc += term;
    }
    if (spec.order.is_integer() && n >= spec.order.ceiling()) break;
    dn = dd * dn;
  }
  Superoperator out = Superoperator::from_dense(ctx, std::move(acc));
  if (!spec.order.is_integer()) {
    const double total = out.dense().cwiseAbs().maxCoeff();
    if (last_norm > spec.order.tail_tol() * total) {
      out = out.with_warning("truncated commutator series: last term is " +
                             std::to_string(last_norm / total) + " of the total");
    }
  }
  return out;
}

DenseOperator liouville_superop_apply(double alpha, double beta, const PhaseFunction2D& symbol,
                                      const ContextPtr& ctx) {
  return f_quantize_grid(symbol, QuantizerWeight::frac_multiplier(alpha, beta), ctx);
}

Superoperator dqp_fracpow(Axis axis, double alpha, const ContextPtr& ctx) {
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::invalid_argument,
          "fractional power of a derivation needs alpha >= 0");
  FracPowOptions opts;
  opts.tolerant_branch = true;
  return superop_fracpow(derivation(ctx, axis), alpha, opts);
}

Superoperator oscillator_generator(double mass, double omega, const ContextPtr& ctx) {
  require(std::isfinite(mass) && mass > 0.0 && std::isfinite(omega) && omega > 0.0,
          ErrorCode::invalid_argument, "oscillator needs mass > 0 and omega > 0");
  const Superoperator lp = lplus(build_p(ctx));
  const Superoperator lq = lplus(build_q(ctx));
  return cplx(-1.0 / mass) * compose(lp, derivation(ctx, Axis::Q)) +
         cplx(mass * omega * omega) * compose(lq, derivation(ctx, Axis::P));
}

DenseOperator oscillator_hamiltonian(double mass, double omega, const ContextPtr& ctx) {
  const DenseOperator q = build_q(ctx);
  const DenseOperator p = build_p(ctx);
  return (p * p) * cplx(0.5 / mass) + (q * q) * cplx(0.5 * mass * omega * omega);
}

}  // namespace fracq
