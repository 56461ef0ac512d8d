#pragma once

#include <iosfwd>
#include <string>

#include "perron/matrix.hpp"

namespace perron {

enum class MatrixFormat { kAuto, kMatrixMarket, kCsv };

// Parse from an input stream. Matrix Market parsing accepts only the dense
// header "matrix array real general" (case-insensitive; "integer" is also
// accepted and read as real) with column-major values; any other field or
// symmetry raises UnsupportedFormatError. CSV parsing accepts '#' comment
// lines, blank lines, and rectangular comma-separated numeric rows.
// Malformed content raises ParseError carrying the 1-based line number.
DenseMatrix parse_matrix_market(std::istream& in);
DenseMatrix parse_csv(std::istream& in);

// Read a matrix file. kAuto sniffs the leading "%%MatrixMarket" banner and
// falls back to CSV. Unreadable files raise IoError.
DenseMatrix read_matrix(const std::string& path,
                        MatrixFormat format = MatrixFormat::kAuto);

// Serialize with 17 significant digits (value-preserving round trip).
std::string format_matrix_market(const DenseMatrix& a);
std::string format_csv(const DenseMatrix& a);

// Write a matrix file; kAuto picks Matrix Market for a ".mtx" suffix and CSV
// otherwise.
void write_matrix(const std::string& path, const DenseMatrix& a,
                  MatrixFormat format = MatrixFormat::kAuto);

}  // namespace perron
