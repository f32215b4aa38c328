#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gthkit/matrix.hpp"
#include "gthkit/rational.hpp"
#include "gthkit/rg.hpp"
#include "gthkit/stochastic.hpp"

namespace gthkit {

/// ".stmx" text format: line 1 holds N, lines 2..N+1 hold the N rows as
/// whitespace-separated decimal floats. '#' starts a comment. The rational
/// variant uses the same layout with "a/b" tokens.
DenseMatrix read_matrix_text(std::istream& in);
DenseMatrix read_matrix_file(const std::string& path);
RationalMatrix read_rational_matrix_text(std::istream& in);
RationalMatrix read_rational_matrix_file(const std::string& path);

/// Writes with shortest-round-trip formatting, so re-reading reproduces the
/// exact doubles.
void write_matrix_text(std::ostream& out, const DenseMatrix& m);
void write_matrix_file(const std::string& path, const DenseMatrix& m);

/// 12 significant digits, the fixed width of every CSV the toolkit emits.
std::string format_csv_value(double x);
/// Shortest representation that round-trips.
std::string format_exact(double x);

/// CSV with header "state,probability" and 1-based state labels.
void write_probability_csv(std::ostream& out, const ProbabilityVector& pi);

/// Three-section text format (R / PSI / G) mirroring ".stmx".
void write_rg_factors(std::ostream& out, const RgFactors& f);
RgFactors read_rg_factors(std::istream& in);

/// Subset syntax "1,2,5" with range shorthand "1..4" (mixable); an optional
/// leading "E=" is accepted. Labels are 1-based and must lie in [1..n].
std::vector<int> parse_subset(const std::string& text, int n);

/// "5,10,20" -> {5,10,20}; validates positivity.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace gthkit
