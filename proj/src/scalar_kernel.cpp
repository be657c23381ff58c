#include "fracq/scalar_kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fracq/error.hpp"

namespace fracq {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// n! for n = 0..22, all exactly representable.
constexpr std::array<double, 23> kFactorial = {
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0};

bool is_nonpositive_integer(double z) { return z <= 0.0 && std::floor(z) == z; }

// Gamma for z >= 0.5.
double gamma_right(double z) {
  if (std::floor(z) == z && z <= static_cast<double>(kFactorial.size())) {
    return kFactorial[static_cast<std::size_t>(z) - 1];
  }
  const double x = z - 1.0;
  double sum = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    sum += kLanczos[k] / (x + static_cast<double>(k));
  }
  const double t = x + kLanczosG + 0.5;
  // Split the power so t^(x+0.5) cannot overflow before exp(-t) scales it.
  const double half = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * sum;
}

}  // namespace

FracOrder::FracOrder(double alpha, int series_cutoff, double tail_tol)
    : alpha_(alpha), m_(0), cutoff_(series_cutoff), tail_tol_(tail_tol) {
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::invalid_argument,
          "fractional order must be finite and >= 0, got " + std::to_string(alpha));
  m_ = static_cast<int>(std::ceil(alpha));
  require(series_cutoff >= 1 && series_cutoff >= m_, ErrorCode::invalid_argument,
          "series cutoff must be >= max(1, ceil(alpha))");
  require(tail_tol > 0.0, ErrorCode::invalid_argument, "tail tolerance must be > 0");
}

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::nan("");
  double r = std::fmod(x, 2.0);  // (-2, 2), exact
  if (r > 1.0) {
    r -= 2.0;
  } else if (r <= -1.0) {
    r += 2.0;
  }
  // r in (-1, 1]
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  if (std::abs(r) <= 0.25) return std::sin(kPi * r);
  return std::copysign(std::cos(kPi * (0.5 - std::abs(r))), r);
}

double cos_pi(double x) {
  if (!std::isfinite(x)) return std::nan("");
  double r = std::fmod(std::abs(x), 2.0);  // [0, 2)
  if (r > 1.0) r = 2.0 - r;                // [0, 1]
  if (r == 0.5) return 0.0;
  if (r <= 0.25) return std::cos(kPi * r);
  if (r >= 0.75) return -std::cos(kPi * (1.0 - r));
  return std::sin(kPi * (0.5 - r));
}

double gamma(double z) {
  require(!std::isnan(z), ErrorCode::invalid_argument, "gamma of NaN");
  if (is_nonpositive_integer(z)) {
    fail(ErrorCode::pole, "gamma has a pole at z = " + std::to_string(z));
  }
  if (z >= 0.5) return gamma_right(z);
  // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
  return kPi / (sin_pi(z) * gamma_right(1.0 - z));
}

double recip_gamma(double z) {
  require(!std::isnan(z), ErrorCode::invalid_argument, "recip_gamma of NaN");
  if (is_nonpositive_integer(z)) return 0.0;
  if (z >= 0.5) return 1.0 / gamma_right(z);
  return sin_pi(z) * gamma_right(1.0 - z) / kPi;
}

double series_coeff(int n, double alpha) {
  require(n >= 0, ErrorCode::invalid_argument, "series index must be >= 0");
  const double nd = static_cast<double>(n);
  const double rg_lower = recip_gamma(alpha - nd + 1.0);
  const double rg_upper = recip_gamma(nd - alpha + 1.0);
  if (rg_lower == 0.0 || rg_upper == 0.0) return 0.0;
  // Gamma(alpha+1)/Gamma(n+1) as a quotient so that n == alpha gives exactly 1.
  return gamma(alpha + 1.0) / gamma(nd + 1.0) * rg_lower * rg_upper;
}

double series_coeff(int n, const FracOrder& order) { return series_coeff(n, order.alpha()); }

cplx BranchedPower::operator()(cplx z) const {
  const double mu = exponent_;
  if (z == cplx(0.0, 0.0)) {
    if (mu > 0.0) return {0.0, 0.0};
    if (mu == 0.0) return {1.0, 0.0};
    fail(ErrorCode::singular_power, "negative power of zero");
  }
  if (mu == 0.0) return {1.0, 0.0};
  const double mag = std::pow(std::abs(z), mu);
  if (z.imag() == 0.0) {
    if (z.real() > 0.0) return {mag, 0.0};
    // Negative real axis: limit from above, arg = +pi.
    return {mag * cos_pi(mu), mag * sin_pi(mu)};
  }
  if (z.real() == 0.0) {
    const double s = z.imag() > 0.0 ? 0.5 : -0.5;
    return {mag * cos_pi(mu * s), mag * sin_pi(mu * s)};
  }
  const double phase = mu * std::arg(z);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

cplx complex_power_ia(double a, double alpha) {
  require(std::isfinite(a) && std::isfinite(alpha), ErrorCode::invalid_argument,
          "complex_power_ia needs finite arguments");
  if (a == 0.0) {
    if (alpha > 0.0) return {0.0, 0.0};
    if (alpha == 0.0) return {1.0, 0.0};
    fail(ErrorCode::multiplier_singularity, "(ia)^alpha is singular at a = 0 for alpha < 0");
  }
  if (alpha == 0.0) return {1.0, 0.0};
  const double mag = std::pow(std::abs(a), alpha);
  const double half = 0.5 * alpha;
  const double s = a > 0.0 ? 1.0 : -1.0;
  return {mag * cos_pi(half), s * mag * sin_pi(half)};
}

}  // namespace fracq
