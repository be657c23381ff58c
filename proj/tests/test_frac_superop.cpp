#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "fracq/frac_superop.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fracq;
using oracle::kPi;

namespace {

FracSuperopSpec exact_q(double alpha) { return {Axis::Q, FracOrder(alpha), SeriesPath::exact, nullptr}; }

double range_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > 1e-10 * s[0]) ++r;
  const Eigen::MatrixXcd y = svd.matrixU().leftCols(r);
  return ((a - b) * y).cwiseAbs().maxCoeff() / (b * y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("exact path examples") {
  const auto a = rl_superop_apply(exact_q(0.5), QMonomial::power(Axis::Q, 1.0));
  CHECK(a.value.terms().size() == 1);
  CHECK(a.value.coeff(0.5).real() == doctest::Approx(1.1283791671).epsilon(1e-10));
  CHECK(a.diagnostics.natural_termination);
  const auto b = rl_superop_apply(exact_q(1.0), QMonomial::power(Axis::Q, 2.0));
  CHECK(b.value.terms().size() == 1);
  CHECK(b.value.coeff(1.0) == cplx(2.0));
  const auto x = QMonomial::power(Axis::Q, 3.0, 2.0) + QMonomial::power(Axis::Q, 0.5);
  const auto c = rl_superop_apply(exact_q(0.0), x);
  CHECK(c.value.coeff(3.0) == cplx(2.0));
  CHECK(c.value.coeff(0.5) == cplx(1.0));
  CHECK(c.value.terms().size() == 2);
}

TEST_CASE("exact path reproduces the Gamma-ratio law") {
  for (Axis ax : {Axis::Q, Axis::P}) {
    for (double a : {0.25, 0.5, 0.75, 1.5, 2.5}) {
      for (int n = 1; n <= 6; ++n) {
        const FracSuperopSpec spec{ax, FracOrder(a), SeriesPath::exact, nullptr};
        const auto r = rl_superop_apply(spec, QMonomial::power(ax, n));
        const double want = oracle::gamma_ratio(n, a);
        CHECK(r.value.terms().size() == (want == 0.0 ? 0u : 1u));
        CHECK(std::abs(r.value.coeff(n - a) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("exact path of a fractional monomial needs the full series") {
  const auto r = rl_superop_apply(exact_q(0.5), QMonomial::power(Axis::Q, 0.5));
  CHECK_FALSE(r.diagnostics.natural_termination);
  CHECK(r.diagnostics.terms_used == 26);
  CHECK_FALSE(r.diagnostics.warnings.empty());
}

TEST_CASE("exact path is hbar independent") {
  for (double a : {0.5, 1.5}) {
    const FracSuperopSpec s1{Axis::Q, FracOrder(a), SeriesPath::exact, OperatorContext::balanced(8, 1.0)};
    const FracSuperopSpec s2{Axis::Q, FracOrder(a), SeriesPath::exact, OperatorContext::balanced(8, 0.1)};
    const auto x = QMonomial::power(Axis::Q, 4.0) + QMonomial::power(Axis::Q, 1.0, cplx(0.0, 2.0));
    const auto r1 = rl_superop_apply(s1, x).value.terms();
    const auto r2 = rl_superop_apply(s2, x).value.terms();
    REQUIRE(r1.size() == r2.size());
    for (std::size_t k = 0; k < r1.size(); ++k) {
      CHECK(r1[k].mu == r2[k].mu);
      CHECK(r1[k].c == r2[k].c);
    }
  }
}

TEST_CASE("path and input validation") {
  const auto ctx = OperatorContext::balanced(8, 1.0);
  CHECK(code_of([&] { rl_superop_apply(exact_q(0.5), DenseOperator::identity(ctx)); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] {
          rl_superop_apply(FracSuperopSpec{Axis::Q, FracOrder(0.5), SeriesPath::matrix, ctx},
                           QMonomial::power(Axis::Q, 1.0));
        }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { rl_superop_apply(exact_q(0.5), QMonomial::power(Axis::P, 1.0)); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] {
          rl_superop_apply(FracSuperopSpec{Axis::P, FracOrder(0.5), SeriesPath::subalgebra, ctx},
                           DenseOperator::identity(ctx));
        }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] {
          rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(1.0), SeriesPath::matrix,
                                            OperatorContext::balanced(65, 1.0)});
        }) == ErrorCode::dimension_cap);
}

TEST_CASE("rl_superop_matrix examples") {
  const auto ctx = OperatorContext::balanced(8, 1.0);
  const auto id = rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(0.0), SeriesPath::matrix, ctx});
  CHECK(oracle::rel_max(id.dense(), Eigen::MatrixXcd::Identity(64, 64)) <= 1e-10);
  const auto one = rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(1.0), SeriesPath::matrix, ctx});
  const Eigen::MatrixXcd want = -oracle::lminus(build_p(ctx).matrix(), 1.0);
  CHECK(oracle::rel_max(one.dense(), want) <= 1e-10);
}

TEST_CASE("integer orders collapse to powers of the derivation") {
  const auto ctx = OperatorContext::balanced(8, 0.5);
  const Eigen::MatrixXcd dq = -oracle::lminus(build_p(ctx).matrix(), 0.5);
  Eigen::MatrixXcd pow = Eigen::MatrixXcd::Identity(64, 64);
  for (int m = 1; m <= 3; ++m) {
    pow = pow * dq;
    const auto s = rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(m), SeriesPath::matrix, ctx});
    CHECK(oracle::rel_max(s.dense(), pow) <= 1e-10);
  }
}

TEST_CASE("half order on Q matches the exact path diagonal") {
  const auto ctx = OperatorContext::uniform(16, 2.0, 1.0);
  const auto s = rl_superop_matrix(FracSuperopSpec{Axis::Q, FracOrder(0.5), SeriesPath::subalgebra, ctx});
  const auto y = s.apply(build_q(ctx)).matrix();
  for (int i = 0; i < 16; ++i) {
    const double want = 1.1283791671 * std::sqrt(ctx->grid()[i]);
    CHECK(std::abs(y(i, i) - want) <= 1e-8 * want + 1e-10);
  }
  CHECK(std::abs(y(0, 1)) == 0.0);
}

TEST_CASE("subalgebra path on dense inputs reports its diagnostics") {
  const auto ctx = OperatorContext::uniform(32, 2.0, 1.0);
  const FracSuperopSpec spec{Axis::Q, FracOrder(0.5), SeriesPath::subalgebra, ctx};
  const auto q2 = DenseOperator::diagonal(ctx, ctx->grid().array().square().cast<cplx>().matrix());
  const auto r = rl_superop_apply(spec, q2);
  CHECK(r.diagnostics.projection_residual < 1e-12);
  CHECK(r.diagnostics.warnings.empty());
  Eigen::VectorXcd rough(32);
  for (int i = 0; i < 32; ++i) rough[i] = std::sqrt(ctx->grid()[i]);
  const auto bad = rl_superop_apply(spec, DenseOperator::diagonal(ctx, rough));
  CHECK(bad.diagnostics.projection_residual > 1e-10);
  CHECK_FALSE(bad.diagnostics.warnings.empty());
}

TEST_CASE("matrix path terminates naturally on polynomial inputs at integer order") {
  const auto ctx = OperatorContext::balanced(16, 1.0);
  const FracSuperopSpec spec{Axis::Q, FracOrder(1.0), SeriesPath::matrix, ctx};
  const auto r = rl_superop_apply(spec, build_q(ctx));
  CHECK(r.diagnostics.natural_termination);
  CHECK(r.diagnostics.terms_used == 2);
  const Eigen::MatrixXcd want = -oracle::lminus(build_p(ctx).matrix(), 1.0);
  const Eigen::MatrixXcd got = oracle::vec(r.value.matrix());
  CHECK(oracle::rel_max(got, want * oracle::vec(build_q(ctx).matrix())) < 1e-12);
}

TEST_CASE("subalgebra derivative power acts as d/dx on polynomials") {
  const auto ctx = OperatorContext::uniform(32, 3.0, 1.0);
  const auto d1 = subalgebra_derivative_power(*ctx, 8, 1);
  const auto d2 = subalgebra_derivative_power(*ctx, 8, 2);
  Eigen::VectorXd f(32);
  Eigen::VectorXd fp(32);
  Eigen::VectorXd fpp(32);
  for (int i = 0; i < 32; ++i) {
    const double x = ctx->grid()[i];
    f[i] = x * x * x - 2.0 * x + 1.0;
    fp[i] = 3.0 * x * x - 2.0;
    fpp[i] = 6.0 * x;
  }
  CHECK((d1 * f - fp).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((d2 * f - fpp).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("liouville_superop_apply examples") {
  const auto ctx = OperatorContext::balanced(32, 1.0);
  const double b = ctx->b();
  const auto a = sample_symbol(*ctx, 32, [&](double q, double p) {
    return std::cos(2.0 * kPi * q / b) * (1.0 + 0.1 * std::sin(kPi * p / aligned_pmax(*ctx)));
  });
  CHECK(oracle::rel_max(liouville_superop_apply(0.0, 0.0, a, ctx).matrix(),
                        f_quantize_grid(a, QuantizerWeight::weyl(), ctx).matrix()) < 1e-12);

  const auto q2 = sample_symbol(*ctx, 32, [](double q, double) { return cplx(q * q); });
  const auto lhs = liouville_superop_apply(1.0, 0.0, q2, ctx);
  const auto rhs = f_quantize_grid(frac_partial_phase(q2, 1.0, 0.0), QuantizerWeight::weyl(), ctx);
  CHECK(oracle::rel_max(lhs.matrix(), rhs.matrix()) < 1e-6);

  const double kq = 2.0 * kPi / b;
  const auto mode = sample_symbol(*ctx, 32, [&](double q, double) { return std::polar(1.0, kq * q); });
  const auto m1 = liouville_superop_apply(0.5, 0.0, mode, ctx);
  const auto m0 = f_quantize_grid(mode, QuantizerWeight::weyl(), ctx);
  const cplx w = complex_power_ia(kq, 0.5);
  CHECK(std::arg(w) == doctest::Approx(kPi / 4.0));
  CHECK(oracle::rel_max(m1.matrix(), w * m0.matrix()) < 1e-6);
}

TEST_CASE("route equivalence on band-limited symbols") {
  const auto ctx = OperatorContext::balanced(32, 0.5);
  const double b = ctx->b();
  const double pm = aligned_pmax(*ctx);
  const auto a = sample_symbol(*ctx, 64, [&](double q, double p) {
    return std::sin(4.0 * kPi * q / b) * std::cos(kPi * p / pm) + cplx(0.0, 0.3) * std::cos(2.0 * kPi * q / b);
  });
  for (double al : {0.25, 1.0}) {
    for (double be : {0.0, 0.5}) {
      const auto lhs = liouville_superop_apply(al, be, a, ctx);
      const auto rhs = f_quantize_grid(frac_partial_phase(a, al, be), QuantizerWeight::weyl(), ctx);
      CHECK(oracle::rel_max(lhs.matrix(), rhs.matrix()) < 1e-7);
    }
  }
}

TEST_CASE("dqp_fracpow examples") {
  const auto ctx = OperatorContext::balanced(8, 1.0);
  const Eigen::MatrixXcd dq = -oracle::lminus(build_p(ctx).matrix(), 1.0);
  CHECK(oracle::rel_max(dqp_fracpow(Axis::Q, 1.0, ctx).dense(), dq) <= 1e-10);
  const auto half = dqp_fracpow(Axis::Q, 0.5, ctx).dense();
  CHECK(range_error(half * half, dq) <= 1e-7);
  for (double a : {0.3, 0.5, 1.7}) {
    CHECK(dqp_fracpow(Axis::Q, a, ctx).apply(DenseOperator::identity(ctx)).max_abs() < 1e-12);
    CHECK(dqp_fracpow(Axis::P, a, ctx).apply(DenseOperator::identity(ctx)).max_abs() < 1e-12);
  }
  CHECK(code_of([&] { dqp_fracpow(Axis::Q, -0.5, ctx); }) == ErrorCode::invalid_argument);
}

TEST_CASE("oscillator generator examples") {
  const double m = 2.0;
  const double w = 0.5;
  const auto ctx = OperatorContext::balanced(128, 1.0);
  const auto gen = oscillator_generator(m, w, ctx);
  const auto q = build_q(ctx);
  const auto p = build_p(ctx);
  const auto h = oscillator_hamiltonian(m, w, ctx);
  CHECK(safe_block_probe(gen.apply(q), p * cplx(-1.0 / m)).max_rel_error <= 5e-2);
  CHECK(safe_block_probe(gen.apply(p), q * cplx(m * w * w)).max_rel_error <= 5e-2);
  ProbeOptions opts;
  opts.reference_scale = h.max_abs();
  CHECK(safe_block_probe(gen.apply(h), DenseOperator::zero(ctx), opts).max_rel_error <= 5e-2);
  CHECK(code_of([&] { oscillator_generator(0.0, 1.0, ctx); }) == ErrorCode::invalid_argument);
}

TEST_CASE("oscillator generator equals the Heisenberg commutator") {
  std::mt19937_64 rng(13);
  for (double hbar : {1.0, 0.1}) {
    const auto ctx = OperatorContext::balanced(16, hbar);
    const auto gen = oscillator_generator(1.5, 0.7, ctx);
    const Eigen::MatrixXcd h = oscillator_hamiltonian(1.5, 0.7, ctx).matrix();
    for (int t = 0; t < 5; ++t) {
      const Eigen::MatrixXcd a = oracle::random_matrix(16, rng);
      const Eigen::MatrixXcd want = (h * a - a * h) / cplx(0.0, hbar);
      CHECK(oracle::rel_max(gen.apply(DenseOperator(ctx, a)).matrix(), want) <= 1e-9);
    }
  }
}
