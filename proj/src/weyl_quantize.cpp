#include "fracq/weyl_quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracq/error.hpp"
#include "fracq/fft.hpp"
#include "fracq/superoperator.hpp"

namespace fracq {

namespace {

constexpr double kPi = std::numbers::pi;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void check_aligned(const PhaseFunction2D& a, const OperatorContext& ctx) {
  require(ctx.is_uniform() && ctx.representation() == Representation::position,
          ErrorCode::grid_mismatch, "grid quantization needs a uniform position-basis context");
  const int d = ctx.dim();
  require(d % 2 == 0, ErrorCode::grid_mismatch, "grid quantization needs an even dimension");
  require(a.np() == d, ErrorCode::grid_mismatch,
          "symbol momentum samples must equal d = " + std::to_string(d));
  require(a.nq() == d || a.nq() == 2 * d, ErrorCode::grid_mismatch,
          "symbol position samples must be d or 2d");
  require(close_rel(a.hbar(), ctx.hbar(), 1e-12), ErrorCode::grid_mismatch, "hbar mismatch");
  require(close_rel(a.b(), ctx.b(), 1e-12), ErrorCode::grid_mismatch, "position range mismatch");
  require(close_rel(a.pmax(), aligned_pmax(ctx), 1e-12), ErrorCode::grid_mismatch,
          "momentum range must be pi hbar d / b");
}

// Symbol values at the 2d - 1 pair midpoints, row k <-> midpoint of i + j = k.
std::vector<cplx> midpoint_rows(const std::vector<cplx>& sym, int nq, int d) {
  const int np = d;
  std::vector<cplx> out(static_cast<std::size_t>(2 * d) * np);
  if (nq == 2 * d) {
    // Fine row m sits at (m+1) h / 2; midpoint k is row k + 1.
    for (int k = 0; k + 1 < 2 * d; ++k) {
      std::copy_n(sym.begin() + static_cast<std::ptrdiff_t>(k + 1) * np, np,
                  out.begin() + static_cast<std::ptrdiff_t>(k) * np);
    }
    return out;
  }
  // Spectral upsampling from rows at (i+1) h to the half-step lattice
  // (k+2) h / 2, whose index k matches the midpoint index.
  std::vector<cplx> coarse = sym;
  fft::along_cols(coarse.data(), d, np, -1);
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (int s = 0; s < d; ++s) {
    const int sg = fft::signed_index(s, d);
    for (int j = 0; j < np; ++j) {
      const cplx v = coarse[static_cast<std::size_t>(s) * np + j] / static_cast<double>(d);
      if (sg == -d / 2) {
        // Nyquist content is split evenly between +d/2 and -d/2.
        out[static_cast<std::size_t>(d / 2) * np + j] += 0.5 * v;
        out[static_cast<std::size_t>(2 * d - d / 2) * np + j] += 0.5 * v;
      } else {
        const int dest = sg >= 0 ? sg : 2 * d + sg;
        out[static_cast<std::size_t>(dest) * np + j] += v;
      }
    }
  }
  fft::along_cols(out.data(), 2 * d, np, +1);
  return out;
}

}  // namespace

QuantizerWeight QuantizerWeight::frac_multiplier(double alpha, double beta) {
  require(std::isfinite(alpha) && std::isfinite(beta) && alpha >= 0.0 && beta >= 0.0,
          ErrorCode::multiplier_singularity, "fractional weight needs alpha, beta >= 0");
  return QuantizerWeight(Kind::frac_multiplier, alpha, beta);
}

cplx QuantizerWeight::operator()(double a, double b, double hbar) const {
  switch (kind_) {
    case Kind::weyl: return 1.0;
    case Kind::rivier: return std::cos(a * b / (2.0 * hbar));
    case Kind::frac_multiplier: return complex_power_ia(a, alpha_) * complex_power_ia(b, beta_);
  }
  return 1.0;
}

double aligned_pmax(const OperatorContext& ctx) {
  return kPi * ctx.hbar() * ctx.dim() / ctx.b();
}

DenseOperator weyl_poly(const PhasePolynomial& a, const ContextPtr& ctx) {
  const int d = ctx->dim();
  for (const auto& [k, c] : a.terms()) {
    require(4 * (k.first + k.second) <= d, ErrorCode::degree_guard,
            "monomial degree " + std::to_string(k.first + k.second) + " exceeds d/4 for d = " +
                std::to_string(d));
  }
  const Eigen::MatrixXcd q = build_q(ctx).matrix();
  const Eigen::MatrixXcd p = build_p(ctx).matrix();
  int nmax = 0;
  int mmax = 0;
  for (const auto& [k, c] : a.terms()) {
    nmax = std::max(nmax, k.first);
    mmax = std::max(mmax, k.second);
  }
  // words(n, m) is the sum of all distinct words with n factors Q and m factors P,
  // split by the first letter.
  std::vector<std::vector<Eigen::MatrixXcd>> words(nmax + 1, std::vector<Eigen::MatrixXcd>(mmax + 1));
  for (int n = 0; n <= nmax; ++n) {
    for (int m = 0; m <= mmax; ++m) {
      if (n == 0 && m == 0) {
        words[0][0] = Eigen::MatrixXcd::Identity(d, d);
        continue;
      }
      Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d, d);
      if (n > 0) w.noalias() += q * words[n - 1][m];
      if (m > 0) w.noalias() += p * words[n][m - 1];
      words[n][m] = std::move(w);
    }
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [k, c] : a.terms()) {
    const double count = std::round(std::exp(std::lgamma(k.first + k.second + 1.0) -
                                             std::lgamma(k.first + 1.0) - std::lgamma(k.second + 1.0)));
    acc += (c / count) * words[k.first][k.second];
  }
  return DenseOperator(ctx, std::move(acc));
}

DenseOperator f_quantize_grid(const PhaseFunction2D& a, const QuantizerWeight& w,
                              const ContextPtr& ctx) {
  check_aligned(a, *ctx);
  const int d = ctx->dim();
  const int nq = a.nq();
  const int np = a.np();
  const double hbar = a.hbar();

  std::vector<cplx> sym = a.values();
  if (w.kind() != QuantizerWeight::Kind::weyl) {
    fft::along_cols(sym.data(), nq, np, -1);
    fft::along_rows(sym.data(), nq, np, -1);
    const double norm = 1.0 / (static_cast<double>(nq) * np);
    for (int r = 0; r < nq; ++r) {
      const double qa = hbar * 2.0 * kPi * fft::signed_index(r, nq) / a.b();
      for (int c = 0; c < np; ++c) {
        const double pb = hbar * 2.0 * kPi * fft::signed_index(c, np) / (2.0 * a.pmax());
        sym[static_cast<std::size_t>(r) * np + c] *= w(qa, pb, hbar) * norm;
      }
    }
    fft::along_rows(sym.data(), nq, np, +1);
    fft::along_cols(sym.data(), nq, np, +1);
  }

  std::vector<cplx> g = midpoint_rows(sym, nq, d);
  // p_j s h / hbar = -pi s + 2 pi j s / d, so G(k, s) = (-1)^s/d * IDFT_j S(k, j).
  fft::along_rows(g.data(), 2 * d, np, +1);
  Eigen::MatrixXcd k(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int s = ((i - j) % d + d) % d;
      const double sign = (s % 2 == 0) ? 1.0 : -1.0;
      k(i, j) = sign * g[static_cast<std::size_t>(i + j) * np + s] / static_cast<double>(d);
    }
  }
  return DenseOperator(ctx, std::move(k));
}

PhaseFunction2D dequantize_weyl(const DenseOperator& op) {
  const auto& ctx = *op.context();
  require(ctx.is_uniform() && ctx.representation() == Representation::position,
          ErrorCode::grid_mismatch, "dequantization needs a uniform position-basis context");
  const int d = ctx.dim();
  require(d % 2 == 0, ErrorCode::grid_mismatch, "dequantization needs an even dimension");
  const Eigen::MatrixXcd& m = op.matrix();

  // Row r of g holds midpoint index k = r - 1; r = 0 is the extrapolated
  // point half a step left of the first grid point.
  const int nq = 2 * d;
  std::vector<cplx> g(static_cast<std::size_t>(nq) * d, cplx(0.0));
  std::vector<int> count(static_cast<std::size_t>(nq) * d, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int s = ((i - j) % d + d) % d;
      const std::size_t idx = static_cast<std::size_t>(i + j + 1) * d + s;
      g[idx] += m(i, j);
      ++count[idx];
    }
  }
  for (int s = 0; s < d; ++s) {
    std::vector<int> have;
    for (int r = 1; r < nq; ++r) {
      const std::size_t idx = static_cast<std::size_t>(r) * d + s;
      if (count[idx] > 0) {
        g[idx] /= static_cast<double>(count[idx]);
        have.push_back(r);
      }
    }
    if (have.empty()) continue;
    // Cubic Lagrange fill from the four nearest populated rows.
    for (int r = 0; r < nq; ++r) {
      if (count[static_cast<std::size_t>(r) * d + s] > 0) continue;
      std::vector<int> nodes = have;
      std::stable_sort(nodes.begin(), nodes.end(),
                       [r](int x, int y) { return std::abs(x - r) < std::abs(y - r); });
      nodes.resize(std::min<std::size_t>(4, nodes.size()));
      cplx v = 0.0;
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        double l = 1.0;
        for (std::size_t b = 0; b < nodes.size(); ++b) {
          if (a != b) l *= static_cast<double>(r - nodes[b]) / (nodes[a] - nodes[b]);
        }
        v += l * g[static_cast<std::size_t>(nodes[a]) * d + s];
      }
      g[static_cast<std::size_t>(r) * d + s] = v;
    }
  }

  // S(k, p_j) = sum_s (-1)^s G(k, s) e^{-2 pi i j s / d}.
  for (int r = 0; r < nq; ++r) {
    for (int s = 1; s < d; s += 2) g[static_cast<std::size_t>(r) * d + s] *= -1.0;
  }
  fft::along_rows(g.data(), nq, d, -1);
  return PhaseFunction2D(ctx.b(), aligned_pmax(ctx), nq, d, ctx.hbar(), std::move(g));
}

}  // namespace fracq
