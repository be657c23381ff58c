#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "fracq/serialize.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fracq;
using namespace fracq::io;

namespace {

std::vector<cplx> awkward_values(std::size_t n) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(u(rng) * 1e-300 * 1e290, u(rng) / 3.0);
  v[0] = cplx(0.1, -0.0);
  v[1] = cplx(1e308, 5e-324);
  return v;
}

}  // namespace

TEST_CASE("fmt17 round-trips doubles") {
  for (double x : {0.1, 1.0 / 3.0, 1e-310, -2.5e300, 123456789.123456789}) {
    CHECK(std::strtod(fmt17(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("grid1d round-trips bit-exactly") {
  const GridFunction1D f(0.0, 2.7, awkward_values(16));
  for (Format fmt : {Format::csv, Format::json}) {
    std::stringstream ss;
    write_grid1d(ss, f, fmt);
    const auto g = read_grid1d(ss, fmt);
    REQUIRE(g.size() == f.size());
    for (int i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
    CHECK(g.x0() == f.x0());
    if (fmt == Format::json) CHECK(g.x1() == f.x1());
  }
}

TEST_CASE("phase2d round-trips bit-exactly") {
  const PhaseFunction2D a(3.0, 1.5, 4, 8, 0.25, awkward_values(32));
  for (Format fmt : {Format::csv, Format::json}) {
    std::stringstream ss;
    write_phase2d(ss, a, fmt);
    const auto b = read_phase2d(ss, fmt, 0.25);
    CHECK(b.nq() == 4);
    CHECK(b.np() == 8);
    CHECK(b.values() == a.values());
    CHECK(b.b() == a.b());
    CHECK(b.pmax() == a.pmax());
  }
}

TEST_CASE("operators round-trip bit-exactly") {
  const auto ctx = OperatorContext::balanced(8, 0.5);
  const DenseOperator p = build_p(ctx);
  for (Format fmt : {Format::csv, Format::json}) {
    std::stringstream ss;
    write_operator(ss, p, fmt);
    const auto back = read_operator(ss, fmt, ctx);
    CHECK(back.matrix() == p.matrix());
  }
}

TEST_CASE("superoperator dump has d^2 rows") {
  const auto ctx = OperatorContext::balanced(4, 1.0);
  std::stringstream ss;
  write_superoperator(ss, lplus(build_q(ctx)), Format::csv);
  const auto m = read_matrix(ss, Format::csv);
  CHECK(m.rows() == 16);
  CHECK(m == lplus(build_q(ctx)).dense());
}

TEST_CASE("polynomials round-trip") {
  const GenPolynomial p({{-0.5, cplx(0.1, 0.2)}, {2.5, 1.0 / 3.0}});
  for (Format fmt : {Format::csv, Format::json}) {
    std::stringstream ss;
    write_polynomial(ss, p, fmt);
    const auto q = read_polynomial(ss, fmt);
    REQUIRE(q.terms().size() == 2);
    CHECK(q.terms()[0].mu == -0.5);
    CHECK(q.terms()[0].c == cplx(0.1, 0.2));
    CHECK(q.terms()[1].c == cplx(1.0 / 3.0));
  }
}

TEST_CASE("csv schema") {
  const GridFunction1D f(0.0, 1.0, std::vector<cplx>(8, cplx(1.0, 0.5)));
  std::stringstream ss;
  write_grid1d(ss, f, Format::csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "index,x,re,im");
  std::string row;
  std::getline(ss, row);
  CHECK(row == "0,0,1,0.5");
}

TEST_CASE("malformed inputs raise io errors") {
  std::stringstream bad_header("i,x,re,im\n0,0,1,0\n");
  CHECK(code_of([&] { read_grid1d(bad_header, Format::csv); }) == ErrorCode::io);
  std::stringstream bad_number("index,x,re,im\n0,0,abc,0\n1,0.1,0,0\n");
  CHECK(code_of([&] { read_grid1d(bad_number, Format::csv); }) == ErrorCode::io);
  std::stringstream bad_json("{\"kind\": \"grid1d\", \"x0\": ");
  CHECK(code_of([&] { read_grid1d(bad_json, Format::json); }) == ErrorCode::io);
  std::stringstream wrong_kind("{\"kind\": \"operator\"}");
  CHECK(code_of([&] { read_grid1d(wrong_kind, Format::json); }) == ErrorCode::io);
  std::stringstream not_square("row,col,re,im\n0,0,1,0\n0,1,1,0\n");
  CHECK(code_of([&] { read_matrix(not_square, Format::csv); }) == ErrorCode::io);
}

TEST_CASE("format selection") {
  CHECK(parse_format("csv") == Format::csv);
  CHECK(parse_format("json") == Format::json);
  CHECK(code_of([] { parse_format("xml"); }) == ErrorCode::invalid_argument);
  CHECK(format_for_path("a/b.json") == Format::json);
  CHECK(format_for_path("a/b.csv") == Format::csv);
  CHECK(format_for_path("") == Format::csv);
}
