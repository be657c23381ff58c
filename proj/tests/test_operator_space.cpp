#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "fracq/operator_space.hpp"
#include "fracq/superoperator.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fracq;

TEST_CASE("context construction and validation") {
  const auto u = OperatorContext::uniform(8, 4.0, 1.0);
  CHECK(u->dim() == 8);
  CHECK(u->grid()[0] == 0.5);
  CHECK(u->b() == 4.0);
  CHECK(u->is_uniform());
  CHECK(u->spacing() == doctest::Approx(0.5));
  CHECK(u->diagonal_axis() == Axis::Q);
  const auto bal = OperatorContext::balanced(64, 0.5);
  CHECK(bal->b() == doctest::Approx(std::sqrt(2.0 * oracle::kPi * 64 * 0.5)));
  CHECK(OperatorContext::uniform(8, 1.0, 1.0, Representation::momentum_positive)->diagonal_axis() == Axis::P);
  CHECK(code_of([] { OperatorContext::from_grid({1.0, 0.5}, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { OperatorContext::from_grid({0.0, 1.0}, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { OperatorContext::uniform(8, 1.0, 0.0); }) == ErrorCode::invalid_argument);
  CHECK_FALSE(OperatorContext::from_grid({1.0, 2.0, 4.0}, 1.0)->is_uniform());
}

TEST_CASE("build_q examples") {
  const auto ctx = OperatorContext::from_grid({1.0, 2.0}, 1.0);
  const auto q = build_q(ctx);
  CHECK(q.matrix()(0, 0) == cplx(1.0));
  CHECK(q.matrix()(1, 1) == cplx(2.0));
  CHECK(q.matrix()(0, 1) == cplx(0.0));
  const auto c8 = OperatorContext::uniform(8, 4.0, 1.0);
  const auto q8 = build_q(c8);
  CHECK(q8.matrix().trace().real() == doctest::Approx(c8->grid().sum()));
  CHECK(q8.matrix().diagonal().real().minCoeff() > 0.0);
}

TEST_CASE("build_p matches the explicit DFT construction") {
  for (double hbar : {1.0, 0.3}) {
    const auto ctx = OperatorContext::uniform(16, 3.0, hbar);
    const auto p = build_p(ctx);
    CHECK(oracle::rel_max(p.matrix(), oracle::momentum(16, ctx->spacing(), hbar)) < 1e-13);
    CHECK((p.matrix() - p.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("momentum spectrum is symmetric up to the Nyquist mode") {
  const auto ctx = OperatorContext::uniform(16, 2.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_p(ctx).matrix());
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 16);
  std::sort(ev.begin(), ev.end());
  const double step = 2.0 * oracle::kPi / (16 * ctx->spacing());
  CHECK(ev.front() == doctest::Approx(-8 * step));
  CHECK(ev.back() == doctest::Approx(7 * step));
  for (int k = 1; k < 8; ++k) CHECK(ev[static_cast<std::size_t>(8 + k)] == doctest::Approx(-ev[static_cast<std::size_t>(8 - k)]));
}

TEST_CASE("canonical commutator on the safe block") {
  const auto ctx = OperatorContext::balanced(128, 1.0);
  const auto q = build_q(ctx);
  const auto p = build_p(ctx);
  const auto id = DenseOperator::identity(ctx);
  const auto c = lminus(q).apply(p);
  CHECK(safe_block_probe(c, id).max_rel_error <= 5e-2);
  CHECK(safe_block_probe(lminus(p).apply(q), id * cplx(-1.0)).max_rel_error <= 5e-2);
  CHECK(std::abs(c.matrix().trace()) < 1e-9);
}

TEST_CASE("probe rejects a wrong identity") {
  const auto ctx = OperatorContext::balanced(128, 1.0);
  const auto q = build_q(ctx);
  const auto p = build_p(ctx);
  const auto id = DenseOperator::identity(ctx);
  CHECK(safe_block_probe(lminus(q).apply(p), id * cplx(-1.0)).max_rel_error > 1.0);
  CHECK(safe_block_probe(q, q).packets == 9);
}

TEST_CASE("DenseOperator arithmetic and checks") {
  const auto ctx = OperatorContext::uniform(4, 1.0, 1.0);
  const auto q = build_q(ctx);
  const auto id = DenseOperator::identity(ctx);
  CHECK((q * id).matrix() == q.matrix());
  CHECK((q - q).max_abs() == 0.0);
  CHECK(q.is_diagonal());
  CHECK(q.is_hermitian());
  CHECK_FALSE(build_p(ctx).is_diagonal());
  const auto other = OperatorContext::uniform(5, 1.0, 1.0);
  CHECK(code_of([&] { q + build_q(other); }) == ErrorCode::grid_mismatch);
  CHECK(code_of([&] { DenseOperator(ctx, Eigen::MatrixXcd::Zero(3, 3)); }) == ErrorCode::grid_mismatch);
}

TEST_CASE("QMonomial exponent shifts") {
  const auto q1 = QMonomial::power(Axis::Q, 1.0);
  CHECK(qmono_apply_lplus_pow(q1, 0.5).coeff(1.5) == cplx(1.0));
  CHECK(qmono_apply_lplus_pow(q1, -0.5).coeff(0.5) == cplx(1.0));
  const auto m = QMonomial::power(Axis::Q, 2.0, 3.0) + q1;
  const auto s = qmono_apply_lplus_pow(m, 1.0);
  CHECK(s.coeff(3.0) == cplx(3.0));
  CHECK(s.coeff(2.0) == cplx(1.0));
  CHECK(s.terms().size() == 2);
  CHECK(code_of([&] { q1 + QMonomial::power(Axis::P, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("QMonomial derivation") {
  const auto d = qmono_apply_deriv(QMonomial::power(Axis::Q, 2.0));
  CHECK(d.coeff(1.0) == cplx(2.0));
  CHECK(qmono_apply_deriv(QMonomial::power(Axis::Q, 0.0, 5.0)).terms().empty());
  const auto h = qmono_apply_deriv(QMonomial::power(Axis::Q, 0.5));
  CHECK(h.coeff(-0.5) == cplx(0.5));
}

TEST_CASE("symbolic monomials agree with diagonal matrices") {
  const auto ctx = OperatorContext::uniform(16, 3.0, 1.0);
  const auto x = QMonomial::power(Axis::Q, 1.5, 2.0) + QMonomial::power(Axis::Q, -0.5, cplx(0.0, 1.0));
  const auto xm = qmono_to_matrix(x, ctx);
  const auto lq = lplus(build_q(ctx));
  for (double mu : {-1.0, -0.5, 0.25, 1.0, 2.5}) {
    const auto sym = qmono_to_matrix(qmono_apply_lplus_pow(x, mu), ctx);
    const auto mat = superop_fracpow(lq, mu).apply(xm);
    CHECK(oracle::rel_max(mat.matrix(), sym.matrix()) <= 1e-10);
  }
  const auto sub = qmono_to_matrix(qmono_apply_deriv(x), ctx);
  const Eigen::VectorXcd g = ctx->grid().cast<cplx>();
  Eigen::VectorXcd want(16);
  for (int i = 0; i < 16; ++i) want[i] = 3.0 * std::sqrt(g[i]) - cplx(0.0, 0.5) * std::pow(g[i], -1.5);
  CHECK(oracle::rel_max(sub.matrix().diagonal(), want) <= 1e-12);
  CHECK(code_of([&] { qmono_to_matrix(QMonomial::power(Axis::P, 1.0), ctx); }) == ErrorCode::invalid_argument);
}
