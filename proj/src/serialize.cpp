#include "fracq/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "fracq/error.hpp"

namespace fracq::io {

using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> read_csv(std::istream& is, std::string_view expected_header) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::io, "empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == expected_header, ErrorCode::io,
          "unexpected CSV header '" + line + "', wanted '" + std::string(expected_header) + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end != s.c_str() && *end == '\0', ErrorCode::io, "malformed number '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  require(end != s.c_str() && *end == '\0', ErrorCode::io, "malformed integer '" + s + "'");
  return v;
}

void check_cells(const std::vector<std::string>& row, std::size_t n) {
  require(row.size() == n, ErrorCode::io,
          "CSV row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(n));
}

json values_json(const std::vector<cplx>& v) {
  json arr = json::array();
  for (const auto& z : v) arr.push_back({z.real(), z.imag()});
  return arr;
}

std::vector<cplx> values_from_json(const json& arr) {
  std::vector<cplx> out;
  out.reserve(arr.size());
  for (const auto& e : arr) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return out;
}

json parse_json(std::istream& is, std::string_view kind) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::io, std::string("malformed JSON: ") + e.what());
  }
  require(j.is_object() && j.value("kind", "") == kind, ErrorCode::io,
          "JSON document is not of kind '" + std::string(kind) + "'");
  return j;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorCode::io, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  fail(ErrorCode::invalid_argument, "unknown format '" + std::string(name) + "' (csv or json)");
}

Format format_for_path(std::string_view path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? Format::json : Format::csv;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid1d(std::ostream& os, const GridFunction1D& f, Format fmt) {
  if (fmt == Format::json) {
    json j{{"kind", "grid1d"}, {"x0", f.x0()}, {"x1", f.x1()}, {"n", f.size()},
           {"values", values_json(f.values())}};
    os << j.dump(1) << '\n';
    return;
  }
  os << "index,x,re,im\n";
  for (int i = 0; i < f.size(); ++i) {
    os << i << ',' << fmt17(f.x(i)) << ',' << fmt17(f[i].real()) << ',' << fmt17(f[i].imag())
       << '\n';
  }
}

GridFunction1D read_grid1d(std::istream& is, Format fmt) {
  if (fmt == Format::json) {
    const json j = parse_json(is, "grid1d");
    return guarded([&] {
      return GridFunction1D(j.at("x0").get<double>(), j.at("x1").get<double>(),
                            values_from_json(j.at("values")));
    });
  }
  const auto rows = read_csv(is, "index,x,re,im");
  require(rows.size() >= 2, ErrorCode::io, "grid file needs at least two rows");
  std::vector<cplx> v;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    check_cells(rows[r], 4);
    require(to_long(rows[r][0]) == static_cast<long>(r), ErrorCode::io, "grid indices must be 0..n-1");
    v.emplace_back(to_double(rows[r][2]), to_double(rows[r][3]));
  }
  const double x0 = to_double(rows[0][1]);
  const double h = to_double(rows[1][1]) - x0;
  return GridFunction1D(x0, x0 + h * static_cast<double>(rows.size()), std::move(v));
}

void write_phase2d(std::ostream& os, const PhaseFunction2D& a, Format fmt) {
  if (fmt == Format::json) {
    json j{{"kind", "phase2d"}, {"b", a.b()},   {"pmax", a.pmax()},
           {"nq", a.nq()},      {"np", a.np()}, {"hbar", a.hbar()},
           {"values", values_json(a.values())}};
    os << j.dump(1) << '\n';
    return;
  }
  os << "index,q,p,re,im\n";
  for (int i = 0; i < a.nq(); ++i) {
    for (int jj = 0; jj < a.np(); ++jj) {
      const cplx z = a(i, jj);
      os << i * a.np() + jj << ',' << fmt17(a.q(i)) << ',' << fmt17(a.p(jj)) << ','
         << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
    }
  }
}

PhaseFunction2D read_phase2d(std::istream& is, Format fmt, double hbar_for_csv) {
  if (fmt == Format::json) {
    const json j = parse_json(is, "phase2d");
    return guarded([&] {
      return PhaseFunction2D(j.at("b").get<double>(), j.at("pmax").get<double>(),
                             j.at("nq").get<int>(), j.at("np").get<int>(),
                             j.at("hbar").get<double>(), values_from_json(j.at("values")));
    });
  }
  const auto rows = read_csv(is, "index,q,p,re,im");
  require(!rows.empty(), ErrorCode::io, "phase grid file is empty");
  std::vector<cplx> v;
  int np = 0;
  const double q0 = rows.empty() ? 0.0 : to_double(rows[0][1]);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    check_cells(rows[r], 5);
    require(to_long(rows[r][0]) == static_cast<long>(r), ErrorCode::io,
            "phase grid indices must be 0..nq*np-1");
    if (to_double(rows[r][1]) == q0) ++np;
    v.emplace_back(to_double(rows[r][3]), to_double(rows[r][4]));
  }
  require(np > 0 && rows.size() % static_cast<std::size_t>(np) == 0, ErrorCode::io,
          "phase grid is not rectangular");
  const int nq = static_cast<int>(rows.size()) / np;
  const double b = to_double(rows.back()[1]);
  const double pmax = -to_double(rows[0][2]);
  return PhaseFunction2D(b, pmax, nq, np, hbar_for_csv, std::move(v));
}

void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m, Format fmt, const char* kind,
                  double hbar) {
  if (fmt == Format::json) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(i, c).real(), m(i, c).imag()});
    }
    json j{{"kind", kind}, {"dim", m.rows()}, {"hbar", hbar}, {"entries", entries}};
    os << j.dump(1) << '\n';
    return;
  }
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << i << ',' << c << ',' << fmt17(m(i, c).real()) << ',' << fmt17(m(i, c).imag()) << '\n';
    }
  }
}

void write_operator(std::ostream& os, const DenseOperator& a, Format fmt) {
  if (fmt == Format::json) {
    const auto& ctx = *a.context();
    json entries = json::array();
    const auto& m = a.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(i, c).real(), m(i, c).imag()});
    }
    std::vector<double> grid(ctx.grid().data(), ctx.grid().data() + ctx.dim());
    json j{{"kind", "operator"},
           {"dim", a.dim()},
           {"hbar", ctx.hbar()},
           {"representation",
            ctx.representation() == Representation::position ? "position" : "momentum_positive"},
           {"grid", grid},
           {"entries", entries}};
    os << j.dump(1) << '\n';
    return;
  }
  write_matrix(os, a.matrix(), fmt, "operator", a.context()->hbar());
}

Eigen::MatrixXcd read_matrix(std::istream& is, Format fmt) {
  if (fmt == Format::json) {
    json j;
    try {
      is >> j;
    } catch (const json::exception& e) {
      fail(ErrorCode::io, std::string("malformed JSON: ") + e.what());
    }
    return guarded([&] {
      const auto dim = j.at("dim").get<Eigen::Index>();
      const auto vals = values_from_json(j.at("entries"));
      require(static_cast<Eigen::Index>(vals.size()) == dim * dim, ErrorCode::io,
              "matrix entry count does not match dim");
      Eigen::MatrixXcd m(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index c = 0; c < dim; ++c) m(i, c) = vals[static_cast<std::size_t>(i * dim + c)];
      }
      return m;
    });
  }
  const auto rows = read_csv(is, "row,col,re,im");
  Eigen::Index dim = 0;
  while (dim * dim < static_cast<Eigen::Index>(rows.size())) ++dim;
  require(dim * dim == static_cast<Eigen::Index>(rows.size()), ErrorCode::io,
          "operator file is not square");
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    check_cells(rows[r], 4);
    const long i = to_long(rows[r][0]);
    const long c = to_long(rows[r][1]);
    require(i == static_cast<long>(r) / dim && c == static_cast<long>(r) % dim, ErrorCode::io,
            "operator entries must be row-major");
    m(i, c) = cplx(to_double(rows[r][2]), to_double(rows[r][3]));
  }
  return m;
}

DenseOperator read_operator(std::istream& is, Format fmt, const ContextPtr& ctx) {
  return DenseOperator(ctx, read_matrix(is, fmt));
}

void write_superoperator(std::ostream& os, const Superoperator& s, Format fmt) {
  write_matrix(os, s.dense(), fmt, "superoperator", s.context()->hbar());
}

void write_polynomial(std::ostream& os, const GenPolynomial& p, Format fmt) {
  if (fmt == Format::json) {
    json terms = json::array();
    for (const auto& t : p.terms()) {
      terms.push_back({{"exponent", t.mu}, {"re", t.c.real()}, {"im", t.c.imag()}});
    }
    json j{{"kind", "polynomial"}, {"variable", std::string(1, p.variable())}, {"terms", terms}};
    os << j.dump(1) << '\n';
    return;
  }
  os << "exponent,re,im\n";
  for (const auto& t : p.terms()) {
    os << fmt17(t.mu) << ',' << fmt17(t.c.real()) << ',' << fmt17(t.c.imag()) << '\n';
  }
}

GenPolynomial read_polynomial(std::istream& is, Format fmt) {
  std::vector<GenPolynomial::Term> terms;
  if (fmt == Format::json) {
    const json j = parse_json(is, "polynomial");
    return guarded([&] {
      for (const auto& t : j.at("terms")) {
        terms.push_back({t.at("exponent").get<double>(),
                         cplx(t.at("re").get<double>(), t.at("im").get<double>())});
      }
      const std::string var = j.value("variable", "x");
      return GenPolynomial(terms, var.empty() ? 'x' : var[0]);
    });
  }
  for (const auto& row : read_csv(is, "exponent,re,im")) {
    check_cells(row, 3);
    terms.push_back({to_double(row[0]), cplx(to_double(row[1]), to_double(row[2]))});
  }
  return GenPolynomial(std::move(terms));
}

}  // namespace fracq::io
