#pragma once

// CSV and JSON schemas shared by the CLI and the golden-file tests.
//
//   grid1d       CSV  index,x,re,im
//                JSON {"kind":"grid1d","x0","x1","n","values":[[re,im],...]}
//   phase2d      CSV  index,q,p,re,im        (index = i*np + j, row-major by q)
//                JSON {"kind":"phase2d","b","pmax","nq","np","hbar","values":[...]}
//   operator     CSV  row,col,re,im          (row-major)
//                JSON {"kind":"operator","dim","hbar","representation","grid",
//                      "entries":[[re,im],...]}
//   superoperator  same as operator with kind "superoperator" and dim = d^2
//   polynomial   CSV  exponent,re,im
//                JSON {"kind":"polynomial","variable","terms":[{"exponent","re","im"}]}
//
// CSV numbers are written with 17 significant digits so that reading a file
// back reproduces every double exactly.

#include <iosfwd>
#include <string>
#include <string_view>

#include "fracq/classical_frac.hpp"
#include "fracq/operator_space.hpp"
#include "fracq/superoperator.hpp"

namespace fracq::io {

enum class Format { csv, json };

Format parse_format(std::string_view name);
/// ".json" selects JSON, anything else CSV.
Format format_for_path(std::string_view path);

std::string fmt17(double v);

void write_grid1d(std::ostream& os, const GridFunction1D& f, Format fmt);
GridFunction1D read_grid1d(std::istream& is, Format fmt);

void write_phase2d(std::ostream& os, const PhaseFunction2D& a, Format fmt);
/// CSV files do not carry hbar; it must be supplied.
PhaseFunction2D read_phase2d(std::istream& is, Format fmt, double hbar_for_csv = 1.0);

void write_operator(std::ostream& os, const DenseOperator& a, Format fmt);
void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m, Format fmt, const char* kind,
                  double hbar);
Eigen::MatrixXcd read_matrix(std::istream& is, Format fmt);
DenseOperator read_operator(std::istream& is, Format fmt, const ContextPtr& ctx);

void write_superoperator(std::ostream& os, const Superoperator& s, Format fmt);

void write_polynomial(std::ostream& os, const GenPolynomial& p, Format fmt);
GenPolynomial read_polynomial(std::istream& is, Format fmt);

}  // namespace fracq::io
