#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracq/classical_frac.hpp"
#include "fracq/error.hpp"
#include "fracq/frac_superop.hpp"
#include "fracq/operator_space.hpp"
#include "fracq/serialize.hpp"
#include "fracq/superoperator.hpp"
#include "fracq/verification.hpp"
#include "fracq/weyl_algebra.hpp"
#include "fracq/weyl_quantize.hpp"

using namespace fracq;
using fracq::io::fmt17;
using fracq::io::Format;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kOperatorCap = 2048;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string path;
  std::string format;

  Format resolved() const {
    if (!format.empty()) return io::parse_format(format);
    return io::format_for_path(path);
  }

  void write(const std::function<void(std::ostream&, Format)>& fn) const {
    const Format f = resolved();
    if (path.empty() || path == "-") {
      fn(std::cout, f);
      return;
    }
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorCode::io, "cannot open '" + path + "' for writing");
    fn(os, f);
    require(static_cast<bool>(os), ErrorCode::io, "failed writing '" + path + "'");
  }
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--out,-o", out.path, "Output file (stdout when omitted)");
  cmd->add_option("--format", out.format, "csv or json (default from the file extension)")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::io, "cannot open '" + path + "'");
  return is;
}

// ---------------------------------------------------------------- deriv

struct FunctionToken {
  enum class Kind { monomial, sine, expmode } kind;
  double param;
};

FunctionToken parse_function(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("function token must look like kind:value");
  const std::string kind = text.substr(0, colon);
  const std::string value = text.substr(colon + 1);
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0' || !std::isfinite(v)) {
    throw UsageError("malformed value in function token '" + text + "'");
  }
  if (kind == "monomial") {
    if (v < 0.0) throw UsageError("monomial exponent must be >= 0");
    return {FunctionToken::Kind::monomial, v};
  }
  if (kind == "sin") return {FunctionToken::Kind::sine, v};
  if (kind == "expmode") return {FunctionToken::Kind::expmode, v};
  throw UsageError("unknown function kind '" + kind + "' (monomial, sin, expmode)");
}

std::function<cplx(double)> as_callable(const FunctionToken& t, double b) {
  switch (t.kind) {
    case FunctionToken::Kind::monomial:
      return [mu = t.param](double x) { return cplx(std::pow(x, mu)); };
    case FunctionToken::Kind::sine:
      return [k = t.param, b](double x) { return cplx(std::sin(2.0 * kPi * k * x / b)); };
    case FunctionToken::Kind::expmode:
      return [k = t.param, b](double x) { return std::polar(1.0, 2.0 * kPi * k * x / b); };
  }
  return {};
}

struct DerivConfig {
  std::string method = "series";
  std::string function;
  std::string input;
  double alpha = 0.5;
  double b = 4.0;
  int n = 1024;
  int cutoff = FracOrder::kDefaultCutoff;
  bool compare = false;
  Output out;
};

struct PointTable {
  std::vector<int> index;
  std::vector<double> x;
  std::vector<cplx> v;
};

PointTable rl_table(const GridFunction1D& f, const FracOrder& order) {
  PointTable t;
  for (int i = 0; i < f.size(); ++i) {
    try {
      const cplx v = rl_integral_oracle(f, order, f.x(i)).value;
      t.index.push_back(i);
      t.x.push_back(f.x(i));
      t.v.push_back(v);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::invalid_argument) throw;
    }
  }
  return t;
}

void write_points(std::ostream& os, const PointTable& t, Format fmt) {
  if (fmt == Format::json) {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t k = 0; k < t.x.size(); ++k) {
      pts.push_back({{"index", t.index[k]}, {"x", t.x[k]}, {"re", t.v[k].real()}, {"im", t.v[k].imag()}});
    }
    os << nlohmann::json{{"kind", "samples"}, {"method", "rl-integral"}, {"points", pts}}.dump(1)
       << '\n';
    return;
  }
  os << "index,x,re,im\n";
  for (std::size_t k = 0; k < t.x.size(); ++k) {
    os << t.index[k] << ',' << fmt17(t.x[k]) << ',' << fmt17(t.v[k].real()) << ','
       << fmt17(t.v[k].imag()) << '\n';
  }
}

GenPolynomial series_of(const GenPolynomial& p, const FracOrder& order) {
  if (p.has_integer_exponents()) return rl_series_poly(p, order);
  GenPolynomial r;
  for (const auto& t : p.terms()) r = r + rl_monomial(t.mu, order, t.c);
  return r;
}

int run_compare(const DerivConfig& c, const FracOrder& order, const GridFunction1D& f,
                const std::optional<GenPolynomial>& poly) {
  std::vector<std::string> names;
  std::vector<std::function<std::optional<cplx>(int)>> methods;
  std::optional<GenPolynomial> series;
  if (poly) {
    series = series_of(*poly, order);
    names.push_back("series");
    methods.emplace_back([&](int i) { return std::optional<cplx>(series->evaluate(f.x(i))); });
  }
  const bool periodic = !poly;
  std::optional<GridFunction1D> gl;
  if (!periodic) {
    gl = gl_oracle(f, order);
    names.push_back("gl");
    methods.emplace_back([&](int i) { return std::optional<cplx>((*gl)[i]); });
    names.push_back("rl-integral");
    methods.emplace_back([&](int i) -> std::optional<cplx> {
      try {
        return rl_integral_oracle(f, order, f.x(i)).value;
      } catch (const Error&) {
        return std::nullopt;
      }
    });
  }
  std::optional<GridFunction1D> ff;
  if (periodic) {
    ff = liouville_fft(f, order.alpha());
    names.push_back("fft");
    methods.emplace_back([&](int i) { return std::optional<cplx>((*ff)[i]); });
  }

  // Compared on the interior 80% of the interval, relative to the first method.
  const double lo = f.x0() + 0.1 * (f.x1() - f.x0());
  const double hi = f.x1() - 0.1 * (f.x1() - f.x0());
  c.out.write([&](std::ostream& os, Format fmt) {
    nlohmann::json rows = nlohmann::json::array();
    if (fmt == Format::csv) {
      os << "index,x";
      for (const auto& nm : names) os << ',' << nm << "_re," << nm << "_im";
      os << ",max_discrepancy\n";
    }
    for (int i = 0; i < f.size(); ++i) {
      const double x = f.x(i);
      if (x < lo || x > hi) continue;
      std::vector<cplx> vals;
      bool ok = true;
      for (auto& m : methods) {
        const auto v = m(i);
        if (!v) {
          ok = false;
          break;
        }
        vals.push_back(*v);
      }
      if (!ok) continue;
      double disc = 0.0;
      const double ref = std::max(std::abs(vals[0]), 1e-300);
      for (std::size_t k = 1; k < vals.size(); ++k) disc = std::max(disc, std::abs(vals[k] - vals[0]) / ref);
      if (fmt == Format::csv) {
        os << i << ',' << fmt17(x);
        for (const auto& v : vals) os << ',' << fmt17(v.real()) << ',' << fmt17(v.imag());
        os << ',' << fmt17(disc) << '\n';
      } else {
        nlohmann::json row{{"index", i}, {"x", x}, {"max_discrepancy", disc}};
        for (std::size_t k = 0; k < vals.size(); ++k) row[names[k]] = {vals[k].real(), vals[k].imag()};
        rows.push_back(row);
      }
    }
    if (fmt == Format::json) {
      os << nlohmann::json{{"kind", "comparison"}, {"alpha", order.alpha()}, {"methods", names}, {"rows", rows}}
                .dump(1)
         << '\n';
    }
  });
  return 0;
}

int cmd_deriv(const DerivConfig& c) {
  if (c.function.empty() == c.input.empty()) throw UsageError("give exactly one of --f or --input");
  const FracOrder order(c.alpha, c.cutoff);
  std::optional<GenPolynomial> poly;
  std::optional<GridFunction1D> grid;
  if (!c.function.empty()) {
    const FunctionToken tok = parse_function(c.function);
    if (tok.kind == FunctionToken::Kind::monomial) poly = GenPolynomial::monomial(tok.param);
    grid = GridFunction1D::sample(0.0, c.b, c.n, as_callable(tok, c.b));
  } else {
    auto is = open_input(c.input);
    grid = io::read_grid1d(is, io::format_for_path(c.input));
  }

  if (c.compare) return run_compare(c, order, *grid, poly);

  if (c.method == "series") {
    if (!poly) {
      throw UsageError("the series method needs a monomial:n input");
    }
    const GenPolynomial r = series_of(*poly, order);
    c.out.write([&](std::ostream& os, Format f) { io::write_polynomial(os, r, f); });
  } else if (c.method == "gl") {
    const auto g = gl_oracle(*grid, order);
    c.out.write([&](std::ostream& os, Format f) { io::write_grid1d(os, g, f); });
  } else if (c.method == "rl-integral") {
    const auto t = rl_table(*grid, order);
    c.out.write([&](std::ostream& os, Format f) { write_points(os, t, f); });
  } else if (c.method == "fft") {
    const auto g = liouville_fft(*grid, c.alpha);
    c.out.write([&](std::ostream& os, Format f) { io::write_grid1d(os, g, f); });
  } else {
    throw UsageError("unknown method '" + c.method + "' (series, gl, rl-integral, fft)");
  }
  return 0;
}

// ---------------------------------------------------------------- quantize

struct QuantizeConfig {
  std::string poly;
  std::string input;
  std::string weight = "weyl";
  int d = 32;
  double hbar = 1.0;
  std::optional<double> b;
  Output out;
};

QuantizerWeight parse_weight(const std::string& w) {
  if (w == "weyl") return QuantizerWeight::weyl();
  if (w == "rivier") return QuantizerWeight::rivier();
  if (w.rfind("frac:", 0) == 0) {
    double a = 0.0;
    double bb = 0.0;
    char tail = 0;
    if (std::sscanf(w.c_str() + 5, "%lf:%lf%c", &a, &bb, &tail) == 2) {
      return QuantizerWeight::frac_multiplier(a, bb);
    }
  }
  throw UsageError("unknown weight '" + w + "' (weyl, rivier, frac:alpha:beta)");
}

int cmd_quantize(const QuantizeConfig& c) {
  if (c.poly.empty() == c.input.empty()) throw UsageError("give exactly one of --poly or --input");
  require(c.d >= 2 && c.d <= kOperatorCap, ErrorCode::dimension_cap,
          "d must lie in [2, " + std::to_string(kOperatorCap) + "]");
  const QuantizerWeight w = parse_weight(c.weight);
  const ContextPtr ctx = c.b ? OperatorContext::uniform(c.d, *c.b, c.hbar)
                             : OperatorContext::balanced(c.d, c.hbar);
  std::optional<DenseOperator> op;
  if (!c.poly.empty()) {
    const PhasePolynomial a = PhasePolynomial::parse(c.poly);
    if (w.kind() == QuantizerWeight::Kind::weyl) {
      op = weyl_poly(a, ctx);
    } else {
      const PhaseFunction2D s = sample_symbol(*ctx, 2 * c.d, [&](double q, double p) { return a.evaluate(q, p); });
      op = f_quantize_grid(s, w, ctx);
    }
  } else {
    auto is = open_input(c.input);
    const PhaseFunction2D s = io::read_phase2d(is, io::format_for_path(c.input), c.hbar);
    op = f_quantize_grid(s, w, ctx);
  }
  const double herm = (op->matrix() - op->matrix().adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(op->max_abs(), 1e-300);
  c.out.write([&](std::ostream& os, Format f) { io::write_operator(os, *op, f); });
  std::ostream& rep = c.out.path.empty() ? std::cerr : std::cout;
  rep << "hermitian: " << (herm <= 1e-12 * scale ? "true" : "false")
      << " max|A - A^H| = " << fmt17(herm) << '\n';
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyConfig {
  std::string suite = "all";
  std::uint64_t seed = 7;
  int d = 32;
  std::optional<double> alpha;
  int nmax = 6;
  std::string json_path;
};

int cmd_verify(const VerifyConfig& c) {
  verify::SuiteConfig cfg;
  cfg.seed = c.seed;
  cfg.d = c.d;
  cfg.alpha = c.alpha;
  cfg.nmax = c.nmax;
  if (c.suite != "all" && c.suite != "none") {
    bool known = false;
    for (const auto& n : verify::suite_names()) known = known || n == c.suite;
    if (!known) throw UsageError("unknown suite '" + c.suite + "'");
  }
  const auto reports = verify::run_suites(c.suite, cfg);
  bool all_ok = true;
  nlohmann::json js = nlohmann::json::array();
  for (const auto& r : reports) {
    all_ok = all_ok && r.passed;
    std::printf("%s %s measured=%.3e allowed=%.3e runtime_ms=%.1f\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.allowed, r.runtime_ms);
    for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
    js.push_back({{"name", r.name}, {"passed", r.passed}, {"measured", r.measured},
                  {"allowed", r.allowed}, {"runtime_ms", r.runtime_ms}, {"details", r.details}});
  }
  std::printf("%zu suites, %s\n", reports.size(), all_ok ? "all passed" : "FAILURES");
  if (!c.json_path.empty()) {
    std::ofstream os(c.json_path);
    require(static_cast<bool>(os), ErrorCode::io, "cannot open '" + c.json_path + "'");
    os << nlohmann::json{{"kind", "verify"}, {"seed", c.seed}, {"suites", js}}.dump(1) << '\n';
  }
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- convergence

struct ConvergenceConfig {
  std::string kind = "gl";
  std::string sizes = "256,512,1024";
  double alpha = 0.5;
  std::string function;
  Output out;
};

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const long n = std::strtol(tok.c_str(), &end, 10);
    if (*end != '\0' || n <= 0) throw UsageError("malformed size '" + tok + "'");
    v.push_back(static_cast<int>(n));
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) throw UsageError("sweep sizes must be strictly increasing");
  }
  return v;
}

double convergence_error(const ConvergenceConfig& c, int n, const FracOrder& order) {
  if (c.kind == "gl" || c.kind == "rl-integral") {
    const FunctionToken tok = parse_function(c.function.empty() ? "monomial:1" : c.function);
    if (tok.kind != FunctionToken::Kind::monomial) throw UsageError("oracle sweeps need monomial:n");
    const GenPolynomial p = GenPolynomial::monomial(tok.param);
    const GenPolynomial exact = series_of(p, order);
    const auto f = GridFunction1D::sample(0.0, 4.0, n, [&](double x) { return p.evaluate(x); });
    std::optional<GridFunction1D> gl;
    if (c.kind == "gl") gl = gl_oracle(f, order);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = f.x(i);
      if (x < 0.4 || x > 3.6) continue;
      const cplx s = exact.evaluate(x);
      const cplx v = gl ? (*gl)[i] : rl_integral_oracle(f, order, x).value;
      err = std::max(err, std::abs(v - s) / std::abs(s));
    }
    return err;
  }
  if (c.kind == "fft") {
    const FunctionToken tok = parse_function(c.function.empty() ? "expmode:3" : c.function);
    if (tok.kind == FunctionToken::Kind::monomial) throw UsageError("fft sweeps need sin:k or expmode:k");
    const double len = 2.0 * kPi;
    const auto f = GridFunction1D::sample(0.0, len, n, as_callable(tok, len));
    const auto g = liouville_fft(f, order.alpha());
    double err = 0.0;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = f.x(i);
      const double k = tok.param;
      cplx want;
      if (tok.kind == FunctionToken::Kind::expmode) {
        want = complex_power_ia(k, order.alpha()) * std::polar(1.0, k * x);
      } else {
        want = (complex_power_ia(k, order.alpha()) * std::polar(1.0, k * x) -
                complex_power_ia(-k, order.alpha()) * std::polar(1.0, -k * x)) /
               cplx(0.0, 2.0);
      }
      err = std::max(err, std::abs(g[i] - want));
      scale = std::max(scale, std::abs(want));
    }
    return scale > 0.0 ? err / scale : err;
  }
  if (c.kind == "commutator") {
    const ContextPtr ctx = OperatorContext::balanced(n, 1.0);
    const Superoperator lq = lminus(build_q(ctx));
    double worst = 0.0;
    for (int deg = 0; deg <= 4; ++deg) {
      for (int m = 0; deg + m <= 4; ++m) {
        const PhasePolynomial a = PhasePolynomial::monomial(deg, m);
        worst = std::max(worst, safe_block_probe(lq.apply(weyl_poly(a, ctx)), weyl_poly(a.d_dp(), ctx))
                                    .max_rel_error);
      }
    }
    return worst;
  }
  throw UsageError("unknown sweep kind '" + c.kind + "' (gl, rl-integral, fft, commutator)");
}

int cmd_convergence(const ConvergenceConfig& c) {
  const auto sizes = parse_sizes(c.sizes);
  const FracOrder order(c.alpha);
  struct Row {
    int size;
    double err;
    double ms;
  };
  std::vector<Row> rows;
  for (int n : sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    const double e = convergence_error(c, n, order);
    rows.push_back({n, e, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()});
  }
  constexpr double kFloor = 1e-12;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].err > rows[i - 1].err && rows[i].err > kFloor) {
      std::cerr << "warning: error increased from size " << rows[i - 1].size << " to "
                << rows[i].size << '\n';
    }
  }
  Output out = c.out;
  if (out.format.empty()) out.format = "csv";
  out.write([&](std::ostream& os, Format f) {
    if (f == Format::json) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) {
        arr.push_back({{"size", r.size}, {"method", c.kind}, {"max_error", r.err}, {"runtime_ms", r.ms}});
      }
      os << nlohmann::json{{"kind", "convergence"}, {"rows", arr}}.dump(1) << '\n';
      return;
    }
    os << "size,method,max_error,runtime_ms\n";
    for (const auto& r : rows) {
      os << r.size << ',' << c.kind << ',' << fmt17(r.err) << ',' << fmt17(r.ms) << '\n';
    }
  });
  return 0;
}

// ---------------------------------------------------------------- superop

struct SuperopConfig {
  std::string kind = "derivation";
  std::string axis = "Q";
  double alpha = 1.0;
  std::string path = "matrix";
  int d = 8;
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;
  std::string diagnostics;
  Output out;
};

int cmd_superop(const SuperopConfig& c) {
  if (c.axis != "Q" && c.axis != "P") throw UsageError("--axis must be Q or P");
  require(c.d >= 2 && c.d <= Superoperator::kDenseCap, ErrorCode::dimension_cap,
          "dense superoperators need 2 <= d <= " + std::to_string(Superoperator::kDenseCap));
  const Axis axis = c.axis == "Q" ? Axis::Q : Axis::P;
  const bool positive = c.kind == "rl" && c.path == "subalgebra" && axis == Axis::P;
  const ContextPtr ctx =
      OperatorContext::balanced(c.d, c.hbar, positive ? Representation::momentum_positive : Representation::position);
  std::optional<Superoperator> s;
  if (c.kind == "lplus") {
    s = lplus(build_axis(ctx, axis));
  } else if (c.kind == "lminus") {
    s = lminus(build_axis(ctx, axis));
  } else if (c.kind == "derivation") {
    s = derivation(ctx, axis);
  } else if (c.kind == "rl") {
    SeriesPath path;
    if (c.path == "matrix") {
      path = SeriesPath::matrix;
    } else if (c.path == "subalgebra") {
      path = SeriesPath::subalgebra;
    } else {
      throw UsageError("--path must be matrix or subalgebra");
    }
    s = rl_superop_matrix(FracSuperopSpec{axis, FracOrder(c.alpha), path, ctx});
  } else if (c.kind == "dqp") {
    s = dqp_fracpow(axis, c.alpha, ctx);
  } else if (c.kind == "oscillator") {
    s = oscillator_generator(c.mass, c.omega, ctx);
  } else {
    throw UsageError("unknown superoperator kind '" + c.kind + "'");
  }
  c.out.write([&](std::ostream& os, Format f) { io::write_superoperator(os, *s, f); });
  for (const auto& w : s->warnings()) std::cerr << "warning: " << w << '\n';
  if (!c.diagnostics.empty()) {
    std::ofstream os(c.diagnostics);
    require(static_cast<bool>(os), ErrorCode::io, "cannot open '" + c.diagnostics + "'");
    os << nlohmann::json{{"kind", "diagnostics"}, {"superoperator", c.kind}, {"warnings", s->warnings()}}.dump(1)
       << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional derivatives, Weyl quantization and superoperator calculus"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
  app.require_subcommand(1);

  DerivConfig dc;
  auto* deriv = app.add_subcommand("deriv", "Fractional derivative of a function on [0, b)");
  deriv->add_option("--method", dc.method, "series, gl, rl-integral or fft");
  deriv->add_option("--f", dc.function, "monomial:mu, sin:k or expmode:k");
  deriv->add_option("--input", dc.input, "grid1d file");
  deriv->add_option("--alpha", dc.alpha, "Order (>= 0)");
  deriv->add_option("--b", dc.b, "Interval length");
  deriv->add_option("--n", dc.n, "Number of samples (power of two)");
  deriv->add_option("--cutoff", dc.cutoff, "Series truncation N");
  deriv->add_flag("--compare", dc.compare, "Run every applicable method and report discrepancies");
  add_output(deriv, dc.out);

  QuantizeConfig qc;
  auto* quant = app.add_subcommand("quantize", "Quantize a phase-space symbol");
  quant->add_option("--poly", qc.poly, "Polynomial such as \"q*p\"");
  quant->add_option("--input", qc.input, "phase2d file on the aligned grid");
  quant->add_option("--weight", qc.weight, "weyl, rivier or frac:alpha:beta");
  quant->add_option("--d", qc.d, "Hilbert-space dimension");
  quant->add_option("--hbar", qc.hbar, "Planck constant");
  quant->add_option("--b", qc.b, "Position range (default balances position and momentum)");
  add_output(quant, qc.out);

  VerifyConfig vc;
  auto* ver = app.add_subcommand("verify", "Run the verification suites");
  ver->add_option("--suite", vc.suite, "all, none or a suite name");
  ver->add_option("--seed", vc.seed, "Random seed");
  ver->add_option("--d", vc.d, "Dimension of the randomized operator suites");
  ver->add_option("--alpha", vc.alpha, "Single order replacing the default sweep");
  ver->add_option("--nmax", vc.nmax, "Highest monomial degree");
  ver->add_option("--json", vc.json_path, "Also write a JSON report");

  ConvergenceConfig cc;
  auto* conv = app.add_subcommand("convergence", "Error versus grid or dimension size");
  conv->add_option("--kind", cc.kind, "gl, rl-integral, fft or commutator");
  conv->add_option("--sizes", cc.sizes, "Comma-separated increasing sizes (may be empty)");
  conv->add_option("--alpha", cc.alpha, "Order");
  conv->add_option("--f", cc.function, "Function token");
  add_output(conv, cc.out);

  SuperopConfig sc;
  auto* sup = app.add_subcommand("superop", "Dump a dense superoperator");
  sup->add_option("--kind", sc.kind, "lplus, lminus, derivation, rl, dqp or oscillator");
  sup->add_option("--axis", sc.axis, "Q or P");
  sup->add_option("--alpha", sc.alpha, "Order for rl and dqp");
  sup->add_option("--path", sc.path, "matrix or subalgebra (rl only)");
  sup->add_option("--d", sc.d, "Dimension (<= 64)");
  sup->add_option("--hbar", sc.hbar, "Planck constant");
  sup->add_option("--mass", sc.mass, "Oscillator mass");
  sup->add_option("--omega", sc.omega, "Oscillator frequency");
  sup->add_option("--diagnostics", sc.diagnostics, "Write warnings as JSON");
  add_output(sup, sc.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*deriv) return cmd_deriv(dc);
    if (*quant) return cmd_quantize(qc);
    if (*ver) return cmd_verify(vc);
    if (*conv) return cmd_convergence(cc);
    if (*sup) return cmd_superop(sc);
  } catch (const UsageError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  }
  return 2;
}
