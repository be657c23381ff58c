#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "fracq/operator_space.hpp"
#include "fracq/superoperator.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fracq;

namespace {

ContextPtr small_ctx(int d = 6, double hbar = 1.0) { return OperatorContext::balanced(d, hbar); }

}  // namespace

TEST_CASE("dense forms use column-major vectorization") {
  const auto ctx = small_ctx();
  const auto q = build_q(ctx).matrix();
  const auto p = build_p(ctx).matrix();
  CHECK(oracle::rel_max(lplus(build_q(ctx)).dense(), oracle::lplus(q)) < 1e-15);
  CHECK(oracle::rel_max(lplus(build_p(ctx)).dense(), oracle::lplus(p)) < 1e-14);
  CHECK(oracle::rel_max(lminus(build_p(ctx)).dense(), oracle::lminus(p, 1.0)) < 1e-14);
  CHECK(oracle::rel_max(Superoperator::identity(ctx).dense(),
                        Eigen::MatrixXcd::Identity(36, 36)) == 0.0);
}

TEST_CASE("apply agrees with the dense matrix") {
  std::mt19937_64 rng(1);
  const auto ctx = small_ctx(8, 0.7);
  const auto x = oracle::random_matrix(8, rng);
  const auto q = build_q(ctx);
  const auto p = build_p(ctx);
  const Superoperator s = compose(lplus(p), derivation(ctx, Axis::Q)) + cplx(0.5, 1.0) * lminus(q) -
                          Superoperator::identity(ctx);
  const auto via_apply = s.apply(DenseOperator(ctx, x)).matrix();
  const auto via_dense = oracle::unvec(s.dense() * oracle::vec(x), 8);
  CHECK(oracle::rel_max(via_apply, via_dense) < 1e-13);
}

TEST_CASE("lplus examples") {
  const auto ctx = small_ctx(8);
  const auto q = build_q(ctx);
  const auto p = build_p(ctx);
  const auto lq = lplus(q);
  CHECK(oracle::rel_max(lq.apply(DenseOperator::identity(ctx)).matrix(), q.matrix()) < 1e-15);
  CHECK(oracle::rel_max(lq.apply(q).matrix(), (q * q).matrix()) < 1e-15);
  CHECK(oracle::rel_max(lq.apply(p).matrix(), 0.5 * (q * p + p * q).matrix()) < 1e-15);
}

TEST_CASE("lminus examples") {
  const auto ctx = small_ctx(8);
  const auto q = build_q(ctx);
  CHECK(lminus(q).apply(q).max_abs() == 0.0);
}

TEST_CASE("derivations have the documented signs") {
  const auto ctx = small_ctx(8);
  const auto p = build_p(ctx);
  const auto q = build_q(ctx);
  CHECK(oracle::rel_max(derivation(ctx, Axis::Q).dense(), -lminus(p).dense()) == 0.0);
  CHECK(oracle::rel_max(derivation(ctx, Axis::P).dense(), lminus(q).dense()) == 0.0);
}

TEST_CASE("Leibniz rule for lminus") {
  std::mt19937_64 rng(17);
  const auto ctx = OperatorContext::balanced(16, 1.0);
  for (Axis ax : {Axis::Q, Axis::P}) {
    const auto l = lminus(build_axis(ctx, ax));
    for (int t = 0; t < 10; ++t) {
      const DenseOperator a(ctx, oracle::random_hermitian(16, rng));
      const DenseOperator b(ctx, oracle::random_hermitian(16, rng));
      CHECK((l.apply(a * b) - l.apply(a) * b - a * l.apply(b)).max_abs() <= 1e-12);
    }
  }
}

TEST_CASE("lplus and lminus of one operator commute") {
  std::mt19937_64 rng(2);
  const auto ctx = OperatorContext::balanced(12, 1.0);
  for (Axis ax : {Axis::Q, Axis::P}) {
    const auto x = build_axis(ctx, ax);
    const auto lp = lplus(x);
    const auto lm = lminus(x);
    for (int t = 0; t < 5; ++t) {
      const DenseOperator a(ctx, oracle::random_matrix(12, rng));
      const auto c = lp.apply(lm.apply(a)) - lm.apply(lp.apply(a));
      CHECK(c.max_abs() <= 1e-12 * std::max(1.0, lp.apply(lm.apply(a)).max_abs()));
    }
  }
}

TEST_CASE("spectrum of lminus(Q) is the set of grid differences over i hbar") {
  const double hbar = 0.5;
  const auto ctx = OperatorContext::uniform(5, 2.0, hbar);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es((cplx(0.0, hbar) * lminus(build_q(ctx))).dense());
  std::vector<double> got;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    CHECK(std::abs(es.eigenvalues()[k].imag()) < 1e-12);
    got.push_back(es.eigenvalues()[k].real());
  }
  std::vector<double> want;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) want.push_back(ctx->grid()[i] - ctx->grid()[j]);
  }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("fractional power examples") {
  const auto ctx = OperatorContext::balanced(8, 1.0);
  const auto lq = lplus(build_q(ctx));
  CHECK(oracle::rel_max(superop_fracpow(lq, 1.0).dense(), lq.dense()) <= 1e-10);
  const auto half = superop_fracpow(lq, 0.5);
  CHECK(oracle::rel_max(half.dense() * half.dense(), lq.dense()) <= 1e-8);
  CHECK(oracle::rel_max(superop_fracpow(lq, 0.0).dense(), Eigen::MatrixXcd::Identity(64, 64)) == 0.0);
  std::mt19937_64 rng(4);
  const DenseOperator a(ctx, oracle::random_matrix(8, rng));
  CHECK(oracle::rel_max(half.apply(half.apply(a)).matrix(), lq.apply(a).matrix()) <= 1e-8);
}

TEST_CASE("fractional powers compose on a dense non-normal superoperator") {
  std::mt19937_64 rng(9);
  const auto ctx = OperatorContext::balanced(4, 1.0);
  Eigen::MatrixXcd m = oracle::random_matrix(16, rng) * 0.1;
  m += 3.0 * Eigen::MatrixXcd::Identity(16, 16);
  const auto s = Superoperator::from_dense(ctx, m);
  for (double m1 : {0.3, 0.5, -0.25}) {
    for (double m2 : {0.2, 0.5, 1.1}) {
      const Eigen::MatrixXcd lhs = superop_fracpow(s, m1).dense() * superop_fracpow(s, m2).dense();
      CHECK(oracle::rel_max(lhs, superop_fracpow(s, m1 + m2).dense()) <= 1e-8);
    }
  }
}

TEST_CASE("fractional power of a Hermitian superoperator against an explicit eigendecomposition") {
  const auto ctx = OperatorContext::balanced(6, 1.0);
  const auto lp = lplus(build_p(ctx)) + cplx(40.0) * Superoperator::identity(ctx);
  const Eigen::MatrixXcd dense = lp.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  const Eigen::VectorXcd root = es.eigenvalues().cwiseSqrt().cast<cplx>();
  const Eigen::MatrixXcd want = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
  CHECK(oracle::rel_max(superop_fracpow(lp, 0.5).dense(), want) <= 1e-10);
}

TEST_CASE("fractional power errors") {
  const auto ctx = OperatorContext::balanced(4, 1.0);
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Identity(16, 16);
  neg(3, 3) = -2.0;
  const auto s = Superoperator::from_dense(ctx, neg);
  CHECK(code_of([&] { superop_fracpow(s, 0.5); }) == ErrorCode::branch_cut);
  FracPowOptions tol;
  tol.tolerant_branch = true;
  const auto r = superop_fracpow(s, 0.5, tol);
  CHECK_FALSE(r.warnings().empty());
  CHECK(std::abs(r.dense()(3, 3) - cplx(0.0, std::sqrt(2.0))) < 1e-14);

  Eigen::MatrixXcd sing = Eigen::MatrixXcd::Identity(16, 16);
  sing(0, 0) = 0.0;
  const auto z = Superoperator::from_dense(ctx, sing);
  CHECK(code_of([&] { superop_fracpow(z, -0.5); }) == ErrorCode::singular_power);
  CHECK(superop_fracpow(z, 0.5).dense()(0, 0) == cplx(0.0));

  Eigen::MatrixXcd jordan = Eigen::MatrixXcd::Identity(16, 16);
  jordan(0, 1) = 1.0;
  CHECK(code_of([&] { superop_fracpow(Superoperator::from_dense(ctx, jordan), 0.5); }) ==
        ErrorCode::ill_conditioned);
}

TEST_CASE("dense materialization is capped") {
  const auto big = OperatorContext::balanced(65, 1.0);
  CHECK(code_of([&] { lplus(build_q(big)).dense(); }) == ErrorCode::dimension_cap);
  const auto ctx = OperatorContext::balanced(8, 1.0);
  CHECK(code_of([&] { lplus(build_q(ctx)).dense(4); }) == ErrorCode::dimension_cap);
}

TEST_CASE("spectral forms of Hermitian generators") {
  const auto ctx = OperatorContext::balanced(6, 1.0);
  const auto q = build_q(ctx);
  const auto sf = lplus(q).spectral_form();
  REQUIRE(sf.has_value());
  CHECK(oracle::rel_max(sf->u, Eigen::MatrixXcd::Identity(6, 6)) == 0.0);
  CHECK(sf->e(1, 2) == 0.5 * (q.matrix()(1, 1) + q.matrix()(2, 2)));
  const auto sm = lminus(build_p(ctx)).spectral_form();
  REQUIRE(sm.has_value());
  CHECK(std::abs(sm->e(3, 3)) < 1e-12);
  CHECK(oracle::rel_max(Superoperator::spectral(ctx, *sm).dense(), lminus(build_p(ctx)).dense()) < 1e-12);
  CHECK_FALSE(Superoperator::from_dense(ctx, Eigen::MatrixXcd::Identity(36, 36)).spectral_form().has_value());
}

TEST_CASE("diagonal maps act on the diagonal only") {
  const auto ctx = OperatorContext::uniform(3, 1.0, 1.0);
  Eigen::MatrixXcd m(3, 3);
  m << 1, 2, 0, 0, 1, 0, 0, 0, 3;
  const auto s = Superoperator::diagonal_map(ctx, m);
  Eigen::MatrixXcd x(3, 3);
  x << 1, 5, 5, 5, 2, 5, 5, 5, 3;
  const auto y = s.apply(DenseOperator(ctx, x)).matrix();
  CHECK(y(0, 0) == cplx(5.0));
  CHECK(y(1, 1) == cplx(2.0));
  CHECK(y(2, 2) == cplx(9.0));
  CHECK(y(0, 1) == cplx(0.0));
  CHECK(oracle::rel_max(oracle::unvec(s.dense() * oracle::vec(x), 3), y) == 0.0);
}
