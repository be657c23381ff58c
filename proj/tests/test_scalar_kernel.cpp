#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracq/scalar_kernel.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fracq;

TEST_CASE("gamma matches known values") {
  CHECK(fracq::gamma(0.5) == doctest::Approx(1.7724538509).epsilon(1e-10));
  CHECK(fracq::gamma(2.0) == 1.0);
  CHECK(fracq::gamma(-0.5) == doctest::Approx(-3.5449077018).epsilon(1e-10));
  CHECK(fracq::gamma(5.0) == 24.0);
}

TEST_CASE("gamma agrees with the C library across the real line") {
  double worst = 0.0;
  for (double z = -9.95; z <= 10.0; z += 0.0125) {
    if (std::abs(z - std::round(z)) < 1e-9 && z <= 0.0) continue;
    worst = std::max(worst, std::abs(fracq::gamma(z) / std::tgamma(z) - 1.0));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("gamma poles raise and recip_gamma vanishes there") {
  for (double z : {0.0, -1.0, -2.0, -7.0}) {
    CHECK(code_of([&] { fracq::gamma(z); }) == ErrorCode::pole);
    CHECK(recip_gamma(z) == 0.0);
  }
  CHECK(code_of([] { fracq::gamma(NAN); }) == ErrorCode::invalid_argument);
}

TEST_CASE("recip_gamma known values") {
  CHECK(recip_gamma(0.5) == doctest::Approx(0.5641895835).epsilon(1e-10));
  CHECK(recip_gamma(1.0) == 1.0);
}

TEST_CASE("recip_gamma times gamma is one off the poles") {
  double worst = 0.0;
  for (double z = -10.0; z <= 10.0; z += 0.01) {
    if (z <= 0.0 && std::abs(z - std::round(z)) < 1e-6) continue;
    worst = std::max(worst, std::abs(recip_gamma(z) * fracq::gamma(z) - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("sin_pi and cos_pi are exact at integers and half-integers") {
  for (int k = -6; k <= 6; ++k) {
    CHECK(sin_pi(k) == 0.0);
    CHECK(std::abs(cos_pi(k)) == 1.0);
    CHECK(cos_pi(k + 0.5) == 0.0);
    CHECK(std::abs(sin_pi(k + 0.5)) == 1.0);
  }
  CHECK(sin_pi(0.25) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("FracOrder ceiling and validation") {
  CHECK(FracOrder(0.0).ceiling() == 0);
  CHECK(FracOrder(0.5).ceiling() == 1);
  CHECK(FracOrder(1.0).ceiling() == 1);
  CHECK(FracOrder(2.5).ceiling() == 3);
  CHECK(FracOrder(2.0).is_integer());
  CHECK_FALSE(FracOrder(2.5).is_integer());
  CHECK(code_of([] { FracOrder(-0.1); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { FracOrder(NAN); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { FracOrder(5.5, 3); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { FracOrder(0.5, 25, 0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("series coefficient examples") {
  CHECK(series_coeff(1, 1.0) == 1.0);
  CHECK(series_coeff(0, 1.0) == 0.0);
  CHECK(series_coeff(2, 0.5) == doctest::Approx(-0.0940315973).epsilon(1e-10));
  CHECK(series_coeff(2, 0.5) == doctest::Approx(-1.0 / (6.0 * std::sqrt(oracle::kPi))).epsilon(1e-14));
}

TEST_CASE("series coefficients match the C library oracle") {
  for (double a : {0.1, 0.25, 0.5, 0.75, 1.3, 1.5, 2.5, 3.7}) {
    for (int n = 0; n <= 30; ++n) {
      const double want = oracle::series_coeff(n, a);
      CHECK(series_coeff(n, a) == doctest::Approx(want).epsilon(1e-12).scale(0.0));
    }
  }
}

TEST_CASE("integer orders keep exactly one coefficient") {
  for (int m = 0; m <= 6; ++m) {
    for (int n = 0; n <= 30; ++n) {
      if (n == m) {
        CHECK(series_coeff(n, static_cast<double>(m)) == 1.0);
      } else {
        CHECK(series_coeff(n, static_cast<double>(m)) == 0.0);
      }
    }
  }
}

TEST_CASE("series coefficients decay like n^(-1-alpha)") {
  for (double a : {0.25, 0.5, 0.75, 1.5, 2.5}) {
    const int n0 = static_cast<int>(std::ceil(2.0 * a)) + 2;
    const double c = std::abs(series_coeff(n0, a)) * std::pow(n0, 1.0 + a);
    for (int n = n0; n <= 200; ++n) {
      CHECK(std::abs(series_coeff(n, a)) <= c * std::pow(n, -1.0 - a) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("complex_power_ia examples") {
  const cplx a = complex_power_ia(1.0, 0.5);
  CHECK(a.real() == doctest::Approx(0.7071067812).epsilon(1e-10));
  CHECK(a.imag() == doctest::Approx(0.7071067812).epsilon(1e-10));
  const cplx b = complex_power_ia(-1.0, 0.5);
  CHECK(b.real() == doctest::Approx(0.7071067812).epsilon(1e-10));
  CHECK(b.imag() == doctest::Approx(-0.7071067812).epsilon(1e-10));
  const cplx c = complex_power_ia(2.0, 1.0);
  CHECK(std::abs(c - cplx(0.0, 2.0)) < 1e-15);
  CHECK(complex_power_ia(0.0, 0.5) == cplx(0.0));
  CHECK(complex_power_ia(0.0, 0.0) == cplx(1.0));
  CHECK(code_of([] { complex_power_ia(0.0, -0.5); }) == ErrorCode::multiplier_singularity);
}

TEST_CASE("complex_power_ia conjugation and semigroup") {
  for (double a : {-3.7, -1.0, -0.2, 0.3, 1.0, 5.5}) {
    for (double al : {0.0, 0.25, 0.5, 1.0, 1.5, 2.3}) {
      CHECK(std::abs(complex_power_ia(-a, al) - std::conj(complex_power_ia(a, al))) < 1e-14);
      for (double be : {0.25, 0.75, 1.0}) {
        const cplx lhs = complex_power_ia(a, al) * complex_power_ia(a, be);
        const cplx rhs = complex_power_ia(a, al + be);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("BranchedPower principal branch") {
  const BranchedPower half(0.5);
  CHECK(std::abs(half(cplx(4.0, 0.0)) - 2.0) < 1e-15);
  CHECK(std::abs(half(cplx(0.0, 1.0)) - std::polar(1.0, oracle::kPi / 4)) < 1e-15);
  CHECK(std::abs(half(cplx(-4.0, 0.0)) - cplx(0.0, 2.0)) < 1e-15);
  for (double re : {0.1, 1.0, 7.0}) {
    for (double im : {-3.0, 0.0, 2.0}) CHECK(half(cplx(re, im)).real() > 0.0);
  }
  CHECK(BranchedPower(0.5)(0.0) == cplx(0.0));
  CHECK(code_of([] { BranchedPower(-0.5)(0.0); }) == ErrorCode::singular_power);
}
