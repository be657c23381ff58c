#include "fracq/verification.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "fracq/classical_frac.hpp"
#include "fracq/error.hpp"
#include "fracq/frac_superop.hpp"
#include "fracq/operator_space.hpp"
#include "fracq/superoperator.hpp"
#include "fracq/weyl_algebra.hpp"
#include "fracq/weyl_quantize.hpp"

namespace fracq::verify {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class... Args>
std::string line(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> order_sweep(const SuiteConfig& cfg) {
  if (cfg.alpha) return {*cfg.alpha};
  return {0.25, 0.5, 0.75, 1.5, 2.5};
}

// Gamma(mu+1)/Gamma(mu+1-alpha) from the C library, independent of the
// Lanczos evaluation used inside the series code.
double gamma_ratio(double mu, double alpha) {
  const double den_arg = mu + 1.0 - alpha;
  if (den_arg <= 0.0 && den_arg == std::floor(den_arg)) return 0.0;
  return std::tgamma(mu + 1.0) / std::tgamma(den_arg);
}

double coeff_error(const GenPolynomial& got, double mu, double expected) {
  double err = std::abs(got.coeff(mu) - expected) / std::max(std::abs(expected), 1e-300);
  if (expected == 0.0) err = std::abs(got.coeff(mu));
  for (const auto& t : got.terms()) {
    if (t.mu != mu) err = std::max(err, std::abs(t.c));
  }
  return err;
}

Eigen::MatrixXcd random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  return (a + a.adjoint()) / (2.0 * std::sqrt(static_cast<double>(d)));
}

Eigen::MatrixXcd random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  return a;
}

// max |(A - B) Y| / max |B Y| with Y an orthonormal basis of the range of B.
double range_restricted_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * s[0];
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > tol) ++r;
  if (r == 0) return (a - b).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd y = svd.matrixU().leftCols(r);
  const Eigen::MatrixXcd by = b * y;
  return ((a - b) * y).cwiseAbs().maxCoeff() / by.cwiseAbs().maxCoeff();
}

SuiteReport monomial_law(const SuiteConfig& cfg) {
  SuiteReport r{"monomial-law", true, 0.0, 1e-12, 0.0, {}};
  for (int n = 1; n <= cfg.nmax; ++n) {
    for (double a : order_sweep(cfg)) {
      const GenPolynomial got = rl_series_poly(GenPolynomial::monomial(n), FracOrder(a));
      r.measured = std::max(r.measured, coeff_error(got, n - a, gamma_ratio(n, a)));
    }
  }
  return r;
}

SuiteReport oracle_triangle(const SuiteConfig& cfg) {
  SuiteReport r{"oracle-triangle", true, 0.0, 2e-2, 0.0, {}};
  bool monotone = true;
  for (int deg = 0; deg <= 4; ++deg) {
    const GenPolynomial p = GenPolynomial::monomial(deg);
    for (double a : order_sweep(cfg)) {
      const FracOrder order(a);
      const GenPolynomial exact = rl_series_poly(p, order);
      double prev_gl = INFINITY;
      double prev_rl = INFINITY;
      for (int n : {256, 512, 1024}) {
        const auto f = GridFunction1D::sample(0.0, 4.0, n, [&](double x) { return p.evaluate(x); });
        const auto gl = gl_oracle(f, order);
        double e_gl = 0.0;
        double e_rl = 0.0;
        for (int i = 0; i < n; ++i) {
          const double x = f.x(i);
          if (x < 0.4 || x > 3.6) continue;
          const cplx s = exact.evaluate(x);
          e_gl = std::max(e_gl, std::abs(gl[i] - s) / std::abs(s));
          e_rl = std::max(e_rl, std::abs(rl_integral_oracle(f, order, x).value - s) / std::abs(s));
        }
        monotone = monotone && e_gl < prev_gl && e_rl < prev_rl;
        prev_gl = e_gl;
        prev_rl = e_rl;
        if (n == 1024) r.measured = std::max({r.measured, e_gl, e_rl});
      }
      r.details.push_back(line("x^%d alpha=%g: n=1024 gl=%.3e rl=%.3e", deg, a, prev_gl, prev_rl));
    }
  }
  if (!monotone) r.details.push_back("errors did not shrink monotonically under refinement");
  r.passed = monotone;
  return r;
}

SuiteReport quantum_identity(const SuiteConfig& cfg) {
  SuiteReport r{"paper-identity", true, 0.0, 1e-8, 0.0, {}};
  double exact_err = 0.0;
  r.details.push_back("axis n alpha gamma_ratio exact_err matrix_err");
  for (Axis axis : {Axis::Q, Axis::P}) {
    const auto rep = axis == Axis::Q ? Representation::position : Representation::momentum_positive;
    const ContextPtr ctx = OperatorContext::uniform(cfg.d, 2.0, 1.0, rep);
    for (int n = 1; n <= cfg.nmax; ++n) {
      for (double a : order_sweep(cfg)) {
        const FracOrder order(a);
        const double want = gamma_ratio(n, a);
        const auto ex = rl_superop_apply(FracSuperopSpec{axis, order, SeriesPath::exact, nullptr},
                                         QMonomial::power(axis, n));
        const double e1 = coeff_error(ex.value.poly(), n - a, want);
        const DenseOperator xn = qmono_to_matrix(QMonomial::power(axis, n), ctx);
        const auto mx = rl_superop_apply(FracSuperopSpec{axis, order, SeriesPath::subalgebra, ctx}, xn);
        const DenseOperator target = qmono_to_matrix(QMonomial::power(axis, n - a, want), ctx);
        const double e2 = want == 0.0 ? mx.value.max_abs()
                                      : rel_max_diff(mx.value.matrix(), target.matrix());
        exact_err = std::max(exact_err, e1);
        r.measured = std::max(r.measured, e2);
        r.details.push_back(line("%c %d %g %.12g %.2e %.2e", axis == Axis::Q ? 'Q' : 'P', n, a,
                                 want, e1, e2));
      }
    }
  }
  r.details.push_back(line("exact path max error %.3e (allowed 1e-12)", exact_err));
  r.passed = exact_err <= 1e-12;
  return r;
}

SuiteReport integer_collapse(const SuiteConfig&) {
  SuiteReport r{"integer-collapse", true, 0.0, 1e-10, 0.0, {}};
  const ContextPtr ctx = OperatorContext::balanced(16, 1.0);
  const Eigen::MatrixXcd lm = lminus(build_p(ctx)).dense();
  const Eigen::MatrixXcd want[] = {-lm, lm * lm};
  for (int m = 1; m <= 2; ++m) {
    const Superoperator s =
        rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(m), SeriesPath::matrix, ctx});
    const double e = rel_max_diff(s.dense(), want[m - 1]);
    r.details.push_back(line("alpha=%d: %.3e", m, e));
    r.measured = std::max(r.measured, e);
  }
  return r;
}

SuiteReport liouville_semigroup(const SuiteConfig& cfg) {
  SuiteReport r{"liouville-semigroup", true, 0.0, 1e-9, 0.0, {}};
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::pair<int, cplx>> modes;
    for (int k = -12; k <= 12; ++k) modes.emplace_back(k, cplx(g(rng), g(rng)));
    const double len = 2.0 * kPi;
    const auto f = GridFunction1D::sample(0.0, len, 512, [&](double x) {
      cplx v = 0.0;
      for (const auto& [k, c] : modes) v += c * std::polar(1.0, k * x);
      return v;
    });
    const auto half2 = liouville_fft(liouville_fft(f, 0.5), 0.5);
    const auto one = liouville_fft(f, 1.0);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      num = std::max(num, std::abs(half2[i] - one[i]));
      den = std::max(den, std::abs(one[i]));
    }
    r.measured = std::max(r.measured, num / den);
  }
  return r;
}

SuiteReport route_equivalence(const SuiteConfig&) {
  SuiteReport r{"route-equivalence", true, 0.0, 1e-7, 0.0, {}};
  const ContextPtr ctx = OperatorContext::balanced(64, 1.0);
  const double b = ctx->b();
  const double pm = aligned_pmax(*ctx);
  const std::function<cplx(double, double)> symbols[] = {
      [&](double q, double) { return std::polar(1.0, 2.0 * kPi * q / b); },
      [&](double q, double p) {
        return std::cos(4.0 * kPi * q / b) * std::polar(1.0, kPi * p / pm);
      },
      [&](double q, double p) {
        return (1.0 + std::sin(2.0 * kPi * q / b)) * std::cos(2.0 * kPi * p / pm) +
               cplx(0.0, 0.5) * std::cos(6.0 * kPi * q / b);
      },
  };
  const std::pair<double, double> orders[] = {{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.75}, {1.5, 0.25}};
  for (std::size_t s = 0; s < std::size(symbols); ++s) {
    const PhaseFunction2D a = sample_symbol(*ctx, 64, symbols[s]);
    for (const auto& [al, be] : orders) {
      const DenseOperator lhs = liouville_superop_apply(al, be, a, ctx);
      const DenseOperator rhs =
          f_quantize_grid(frac_partial_phase(a, al, be), QuantizerWeight::weyl(), ctx);
      const double e = rel_max_diff(lhs.matrix(), rhs.matrix());
      r.details.push_back(line("symbol %zu alpha=%g beta=%g: %.3e", s, al, be, e));
      r.measured = std::max(r.measured, e);
    }
  }
  return r;
}

SuiteReport commutator_correspondence(const SuiteConfig&) {
  SuiteReport r{"commutator-correspondence", true, 0.0, 0.0, 0.0, {}};
  const double hbar = 1.0;
  const OrderedPolynomial q = OrderedPolynomial::q(hbar);
  const OrderedPolynomial p = OrderedPolynomial::p(hbar);
  double sym_err = 0.0;
  for (int n = 0; n <= 4; ++n) {
    for (int m = 0; n + m <= 4; ++m) {
      const PhasePolynomial a = PhasePolynomial::monomial(n, m);
      const OrderedPolynomial pa = weyl_symbolic(a, hbar);
      sym_err = std::max(sym_err, weyl_symbolic(a.d_dp(), hbar).max_abs_diff(sym_lminus(q, pa)));
      sym_err = std::max(sym_err, weyl_symbolic(a.d_dq(), hbar).max_abs_diff(sym_lminus(p, pa) * -1.0));
    }
  }
  r.details.push_back(line("symbolic: %.3e (allowed 1e-12)", sym_err));
  bool ok = sym_err <= 1e-12;
  const std::pair<int, double> sizes[] = {{128, 5e-2}, {512, 1e-2}};
  for (const auto& [d, tol] : sizes) {
    const ContextPtr ctx = OperatorContext::balanced(d, hbar);
    const Superoperator lq = lminus(build_q(ctx));
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) {
      for (int m = 0; n + m <= 4; ++m) {
        const PhasePolynomial a = PhasePolynomial::monomial(n, m);
        const DenseOperator lhs = weyl_poly(a.d_dp(), ctx);
        const DenseOperator rhs = lq.apply(weyl_poly(a, ctx));
        worst = std::max(worst, safe_block_probe(rhs, lhs).max_rel_error);
      }
    }
    r.details.push_back(line("d=%d safe-block probe: %.3e (allowed %g)", d, worst, tol));
    ok = ok && worst <= tol;
    if (d == 512) {
      r.measured = worst;
      r.allowed = tol;
    }
  }
  r.passed = ok;
  return r;
}

SuiteReport leibniz(const SuiteConfig& cfg) {
  SuiteReport r{"leibniz", true, 0.0, 1e-12, 0.0, {}};
  std::mt19937_64 rng(cfg.seed);
  const ContextPtr ctx = OperatorContext::balanced(cfg.d, 1.0);
  for (Axis axis : {Axis::Q, Axis::P}) {
    const Superoperator l = lminus(build_axis(ctx, axis));
    for (int t = 0; t < 100; ++t) {
      const DenseOperator a(ctx, random_hermitian(cfg.d, rng));
      const DenseOperator b(ctx, random_hermitian(cfg.d, rng));
      const DenseOperator lhs = l.apply(a * b);
      const DenseOperator rhs = l.apply(a) * b + a * l.apply(b);
      r.measured = std::max(r.measured, (lhs - rhs).max_abs());
    }
  }
  return r;
}

SuiteReport oscillator(const SuiteConfig& cfg) {
  SuiteReport r{"oscillator", true, 0.0, 1e-9, 0.0, {}};
  std::mt19937_64 rng(cfg.seed);
  for (double hbar : {1.0, 0.1}) {
    const ContextPtr ctx = OperatorContext::balanced(cfg.d, hbar);
    const Superoperator gen = oscillator_generator(1.0, 1.0, ctx);
    const Eigen::MatrixXcd h = oscillator_hamiltonian(1.0, 1.0, ctx).matrix();
    for (int t = 0; t < 100; ++t) {
      const Eigen::MatrixXcd a = random_matrix(cfg.d, rng);
      const Eigen::MatrixXcd want = (h * a - a * h) / cplx(0.0, hbar);
      r.measured = std::max(r.measured, rel_max_diff(gen.apply(DenseOperator(ctx, a)).matrix(), want));
    }
  }
  return r;
}

SuiteReport fracpow_semigroup(const SuiteConfig&) {
  SuiteReport r{"fracpow-semigroup", true, 0.0, 1e-8, 0.0, {}};
  const ContextPtr ctx = OperatorContext::balanced(16, 1.0);
  const std::pair<const char*, Superoperator> cases[] = {
      {"L+_Q", lplus(build_q(ctx))},
      {"rl_superop_matrix(alpha=1)",
       rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(1.0), SeriesPath::matrix, ctx})},
  };
  for (const auto& [name, s] : cases) {
    const Eigen::MatrixXcd half = superop_fracpow(s, 0.5).dense();
    const double e = range_restricted_error(half * half, s.dense());
    r.details.push_back(line("%s: %.3e", name, e));
    r.measured = std::max(r.measured, e);
  }
  for (Axis axis : {Axis::Q, Axis::P}) {
    const Eigen::MatrixXcd half = dqp_fracpow(axis, 0.5, ctx).dense();
    const double e = range_restricted_error(half * half, dqp_fracpow(axis, 1.0, ctx).dense());
    r.details.push_back(line("D_%c^(1/2) squared: %.3e", axis == Axis::Q ? 'Q' : 'P', e));
    r.measured = std::max(r.measured, e);
  }
  return r;
}

SuiteReport hbar_independence(const SuiteConfig& cfg) {
  SuiteReport r{"hbar-independence", true, 0.0, 0.0, 0.0, {}};
  for (double a : order_sweep(cfg)) {
    for (int n = 1; n <= cfg.nmax; ++n) {
      std::vector<GenPolynomial::Term> out[2];
      int slot = 0;
      for (double hbar : {1.0, 0.1}) {
        const FracSuperopSpec spec{Axis::Q, FracOrder(a), SeriesPath::exact,
                                   OperatorContext::balanced(16, hbar)};
        out[slot++] = rl_superop_apply(spec, QMonomial::power(Axis::Q, n)).value.terms();
      }
      bool same = out[0].size() == out[1].size();
      for (std::size_t k = 0; same && k < out[0].size(); ++k) {
        same = out[0][k].mu == out[1][k].mu && out[0][k].c == out[1][k].c;
      }
      if (!same) {
        r.measured += 1.0;
        r.details.push_back(line("n=%d alpha=%g differs between hbar=1 and hbar=0.1", n, a));
      }
    }
  }
  return r;
}

using SuiteFn = SuiteReport (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"monomial-law", monomial_law},
      {"oracle-triangle", oracle_triangle},
      {"paper-identity", quantum_identity},
      {"integer-collapse", integer_collapse},
      {"liouville-semigroup", liouville_semigroup},
      {"route-equivalence", route_equivalence},
      {"commutator-correspondence", commutator_correspondence},
      {"leibniz", leibniz},
      {"oscillator", oscillator},
      {"fracpow-semigroup", fracpow_semigroup},
      {"hbar-independence", hbar_independence},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, f] : registry()) v.push_back(n);
    return v;
  }();
  return names;
}

SuiteReport run_suite(std::string_view name, const SuiteConfig& cfg) {
  require(cfg.d >= 8 && cfg.d <= 1024, ErrorCode::invalid_argument, "--d must lie in [8, 1024]");
  require(cfg.nmax >= 1 && cfg.nmax <= 12, ErrorCode::invalid_argument, "--nmax must lie in [1, 12]");
  if (cfg.alpha) {
    require(std::isfinite(*cfg.alpha) && *cfg.alpha >= 0.0, ErrorCode::invalid_argument,
            "--alpha must be >= 0");
  }
  for (const auto& [n, f] : registry()) {
    if (n != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep;
    try {
      rep = f(cfg);
      rep.passed = rep.passed && rep.measured <= rep.allowed;
    } catch (const Error& e) {
      rep.name = n;
      rep.passed = false;
      rep.details.push_back(std::string("error: ") + std::string(to_string(e.code())) + ": " + e.what());
    }
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  fail(ErrorCode::invalid_argument, "unknown suite '" + std::string(name) + "'");
}

std::vector<SuiteReport> run_suites(std::string_view selector, const SuiteConfig& cfg) {
  std::vector<SuiteReport> out;
  if (selector == "none") return out;
  if (selector == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n, cfg));
    return out;
  }
  out.push_back(run_suite(selector, cfg));
  return out;
}

}  // namespace fracq::verify
