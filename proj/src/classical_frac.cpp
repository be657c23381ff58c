#include "fracq/classical_frac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracq/error.hpp"
#include "fracq/fft.hpp"
#include "fracq/simd/kernels.hpp"

namespace fracq {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void normalize(std::vector<GenPolynomial::Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.mu < b.mu; });
  std::vector<GenPolynomial::Term> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().mu == t.mu) {
      merged.back().c += t.c;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.c == cplx(0.0, 0.0); });
  terms = std::move(merged);
}

// Falling factorial k (k-1) ... (k-n+1).
double falling(int k, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= static_cast<double>(k - i);
  return r;
}

// Per-bin factors (i * scale * 2 pi s / period)^alpha / n for a length-n
// transform; the 1/n completes the unnormalized inverse.
std::vector<cplx> multiplier_table(int n, double period, double scale, double alpha) {
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = scale * 2.0 * std::numbers::pi * fft::signed_index(k, n) / period;
    w[static_cast<std::size_t>(k)] = complex_power_ia(a, alpha) / static_cast<double>(n);
  }
  return w;
}

}  // namespace

GenPolynomial::GenPolynomial(std::vector<Term> terms, char variable)
    : terms_(std::move(terms)), variable_(variable) {
  for (const auto& t : terms_) {
    require(std::isfinite(t.mu) && std::isfinite(t.c.real()) && std::isfinite(t.c.imag()),
            ErrorCode::invalid_argument, "polynomial terms must be finite");
  }
  normalize(terms_);
}

GenPolynomial GenPolynomial::monomial(double mu, cplx c, char variable) {
  return GenPolynomial({{mu, c}}, variable);
}

bool GenPolynomial::has_integer_exponents() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.mu >= 0.0 && std::floor(t.mu) == t.mu; });
}

double GenPolynomial::max_exponent() const { return terms_.empty() ? 0.0 : terms_.back().mu; }

cplx GenPolynomial::evaluate(double x) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += t.c * std::pow(x, t.mu);
  return acc;
}

cplx GenPolynomial::coeff(double mu) const {
  for (const auto& t : terms_) {
    if (t.mu == mu) return t.c;
  }
  return 0.0;
}

GenPolynomial GenPolynomial::operator+(const GenPolynomial& other) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return GenPolynomial(std::move(all), variable_);
}

GenPolynomial GenPolynomial::operator*(cplx s) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.c *= s;
  return GenPolynomial(std::move(out), variable_);
}

GridFunction1D::GridFunction1D(double x0, double x1, std::vector<cplx> values)
    : x0_(x0), x1_(x1), values_(std::move(values)) {
  require(std::isfinite(x0) && std::isfinite(x1) && x1 > x0, ErrorCode::invalid_argument,
          "grid interval must satisfy x0 < x1");
  const int n = static_cast<int>(values_.size());
  require(n >= 8 && is_power_of_two(n), ErrorCode::invalid_argument,
          "grid size must be a power of two >= 8, got " + std::to_string(n));
  for (const auto& v : values_) {
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::invalid_argument,
            "grid values must be finite");
  }
}

PhaseFunction2D::PhaseFunction2D(double b, double pmax, int nq, int np, double hbar,
                                 std::vector<cplx> values)
    : b_(b), pmax_(pmax), nq_(nq), np_(np), hbar_(hbar), values_(std::move(values)) {
  require(std::isfinite(b) && b > 0.0, ErrorCode::invalid_argument, "q range b must be > 0");
  require(std::isfinite(pmax) && pmax > 0.0, ErrorCode::invalid_argument, "pmax must be > 0");
  require(std::isfinite(hbar) && hbar > 0.0, ErrorCode::invalid_argument, "hbar must be > 0");
  require(is_power_of_two(nq) && is_power_of_two(np) && nq >= 2 && np >= 2,
          ErrorCode::invalid_argument, "phase grid sizes must be powers of two >= 2");
  require(values_.size() == static_cast<std::size_t>(nq) * static_cast<std::size_t>(np),
          ErrorCode::grid_mismatch, "phase grid value count does not match nq * np");
  for (const auto& v : values_) {
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::invalid_argument,
            "phase grid values must be finite");
  }
}

GenPolynomial rl_monomial(double mu, const FracOrder& order, cplx c) {
  require(std::isfinite(mu) && mu >= 0.0, ErrorCode::invalid_argument,
          "monomial exponent must be >= 0");
  const double ratio = gamma(mu + 1.0) * recip_gamma(mu + 1.0 - order.alpha());
  if (ratio == 0.0) return GenPolynomial({}, 'x');
  return GenPolynomial::monomial(mu - order.alpha(), c * ratio);
}

GenPolynomial rl_series_poly(const GenPolynomial& p, const FracOrder& order) {
  require(p.has_integer_exponents(), ErrorCode::invalid_argument,
          "series path needs non-negative integer exponents");
  const double alpha = order.alpha();
  std::vector<GenPolynomial::Term> out;
  for (const auto& t : p.terms()) {
    const int k = static_cast<int>(t.mu);
    // d^n x^k = k!/(k-n)! x^{k-n}; the factor x^{n-alpha} restores x^{k-alpha}.
    double sum = 0.0;
    for (int n = 0; n <= k; ++n) {
      const double a = series_coeff(n, alpha);
      if (a != 0.0) sum += a * falling(k, n);
    }
    if (sum != 0.0) out.push_back({t.mu - alpha, t.c * sum});
  }
  return GenPolynomial(std::move(out), p.variable());
}

GridFunction1D gl_oracle(const GridFunction1D& f, const FracOrder& order) {
  require(f.x0() == 0.0, ErrorCode::invalid_argument, "Grunwald-Letnikov oracle needs x0 = 0");
  const int n = f.size();
  const double alpha = order.alpha();
  // Weights stored reversed so each output is one contiguous dot product.
  std::vector<double> rev(static_cast<std::size_t>(n));
  double c = 1.0;
  rev[static_cast<std::size_t>(n - 1)] = c;
  for (int j = 1; j < n; ++j) {
    c *= (j - 1 - alpha) / j;
    rev[static_cast<std::size_t>(n - 1 - j)] = c;
  }
  const double scale = std::pow(f.spacing(), -alpha);
  const auto& kern = simd::active();
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const cplx s = kern.dot_real_complex(rev.data() + (n - 1 - i), f.values().data(),
                                         static_cast<std::size_t>(i + 1));
    out[static_cast<std::size_t>(i)] = s * scale;
  }
  return GridFunction1D(f.x0(), f.x1(), std::move(out));
}

namespace {

// (1/Gamma(g)) int_0^t (t - y)^{g-1} f(y) dy for piecewise-linear f on the grid.
cplx weakly_singular_integral(const GridFunction1D& f, double t, double g) {
  const double h = f.spacing();
  const int n = f.size();
  cplx total = 0.0;
  for (int k = 0; k < n - 1; ++k) {
    const double a = k * h;
    if (a >= t) break;
    const double e = std::min((k + 1) * h, t);
    const cplx fa = f[k];
    const cplx slope = (f[k + 1] - fa) / h;
    const double u1 = t - a;
    const double u0 = t - e;
    const double m0 = (std::pow(u1, g) - std::pow(u0, g)) / g;
    const double m1 = (std::pow(u1, g + 1.0) - std::pow(u0, g + 1.0)) / (g + 1.0);
    total += (fa + slope * (t - a)) * m0 - slope * m1;
  }
  return total * recip_gamma(g);
}

// Fornberg weights for the m-th derivative at z from nodes x.
std::vector<double> fornberg(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      auto& ci = c[static_cast<std::size_t>(i)];
      auto& cim = c[static_cast<std::size_t>(i - 1)];
      auto& cj = c[static_cast<std::size_t>(j)];
      if (j == i - 1) {
        for (int k = mn; k > 0; --k) {
          ci[static_cast<std::size_t>(k)] =
              c1 * (k * cim[static_cast<std::size_t>(k - 1)] - c5 * cim[static_cast<std::size_t>(k)]) / c2;
        }
        ci[0] = -c1 * c5 * cim[0] / c2;
      }
      for (int k = mn; k > 0; --k) {
        cj[static_cast<std::size_t>(k)] =
            (c4 * cj[static_cast<std::size_t>(k)] - k * cj[static_cast<std::size_t>(k - 1)]) / c3;
      }
      cj[0] = c4 * cj[0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return w;
}

}  // namespace

OracleValue rl_integral_oracle(const GridFunction1D& f, const FracOrder& order, double x) {
  require(f.x0() == 0.0, ErrorCode::invalid_argument, "Riemann-Liouville oracle needs x0 = 0");
  const double alpha = order.alpha();
  const double h = f.spacing();
  // Integer orders would need Gamma(0) with m = ceil(alpha); one more
  // derivative keeps the kernel exponent g in (0, 1].
  const int m = static_cast<int>(std::floor(alpha)) + 1;
  const double g = m - alpha;
  const int r = (m + 1) / 2;
  const double reach = std::max(m, r + 1) * h;
  require(x >= reach && x <= f.x1() - reach, ErrorCode::invalid_argument,
          "evaluation point too close to the grid boundary");

  std::vector<double> nodes;
  for (int j = -r; j <= r; ++j) nodes.push_back(static_cast<double>(j));
  const auto w = fornberg(0.0, nodes, m);
  cplx acc = 0.0;
  for (int j = -r; j <= r; ++j) {
    const double wj = w[static_cast<std::size_t>(j + r)];
    if (wj != 0.0) acc += wj * weakly_singular_integral(f, x + j * h, g);
  }
  return {acc / std::pow(h, m), 2};
}

GridFunction1D liouville_fft(const GridFunction1D& f, double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::invalid_argument,
          "Liouville order must be >= 0");
  const int n = f.size();
  std::vector<cplx> buf = f.values();
  fft::forward(buf.data(), n);
  const auto w = multiplier_table(n, f.x1() - f.x0(), 1.0, alpha);
  simd::active().cmul_inplace(buf.data(), w.data(), buf.size());
  fft::inverse(buf.data(), n);
  return GridFunction1D(f.x0(), f.x1(), std::move(buf));
}

PhaseFunction2D frac_partial_phase(const PhaseFunction2D& A, double alpha, double beta) {
  require(std::isfinite(alpha) && std::isfinite(beta) && alpha >= 0.0 && beta >= 0.0,
          ErrorCode::invalid_argument, "phase-space orders must be >= 0");
  const int nq = A.nq();
  const int np = A.np();
  std::vector<cplx> buf = A.values();
  const auto& kern = simd::active();

  // q axis: columns of the row-major array.
  fft::along_cols(buf.data(), nq, np, -1);
  const auto wq = multiplier_table(nq, A.b(), A.hbar(), alpha);
  for (int i = 0; i < nq; ++i) {
    const cplx wi = wq[static_cast<std::size_t>(i)];
    for (int j = 0; j < np; ++j) buf[static_cast<std::size_t>(i) * np + j] *= wi;
  }
  fft::along_cols(buf.data(), nq, np, +1);

  // p axis: rows.
  fft::along_rows(buf.data(), nq, np, -1);
  const auto wp = multiplier_table(np, 2.0 * A.pmax(), A.hbar(), beta);
  for (int i = 0; i < nq; ++i) {
    kern.cmul_inplace(buf.data() + static_cast<std::size_t>(i) * np, wp.data(),
                      static_cast<std::size_t>(np));
  }
  fft::along_rows(buf.data(), nq, np, +1);
  return PhaseFunction2D(A.b(), A.pmax(), nq, np, A.hbar(), std::move(buf));
}

}  // namespace fracq
