#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace perron {

// ---------------------------------------------------------------------------
// Error taxonomy. Everything thrown by the library derives from Error so the
// CLI can map failures to exit codes in one place.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An entry overflowed (or went non-finite) during accumulation. For Taylor
// accumulations, term_index names the offending term.
class NumericOverflowError : public Error {
 public:
  NumericOverflowError(const std::string& what, long term_index = -1)
      : Error(what), term_index(term_index) {}
  long term_index;
};

// ||T_n(gamma) M|| collapsed; the truncated polynomial is numerically
// singular at this depth.
class SingularIterationError : public Error {
 public:
  using Error::Error;
};

// Input outside the operation's domain (zero matrix, rank-deficient
// initialization, and similar).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A beta ratio's denominator vanished: the probed column was already
// annihilated at power annihilation_order.
class DegenerateRatioError : public Error {
 public:
  DegenerateRatioError(const std::string& what, int annihilation_order)
      : Error(what), annihilation_order(annihilation_order) {}
  int annihilation_order;
};

// Gradient-flow trajectory left the admissible interval.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// The cyclic-order detector could not certify any order.
class CyclicOrderUnresolvedError : public Error {
 public:
  using Error::Error;
};

// Basis extraction found no columns above the rank tolerance.
class EmptySpaceError : public Error {
 public:
  using Error::Error;
};

// The brute-force reference solver failed to converge or hit an
// internal inconsistency.
class OracleFailureError : public Error {
 public:
  using Error::Error;
};

// Invalid scalar/integer argument (non-positive depth, bad threshold, ...).
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; line is 1-based when known, 0 otherwise.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line(line) {}
  long line;
};

// Structurally valid file in a format (or field type) this tool does not
// handle.
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// DenseMatrix: row-major dense real matrix. Values are treated as immutable
// once an operation has produced them; all operations return fresh matrices.
// ---------------------------------------------------------------------------

class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}

  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1)
      throw DimensionError("matrix dimensions must be at least 1x1");
    data_.assign(static_cast<size_t>(rows) * cols, fill);
  }

  static DenseMatrix identity(int m) {
    DenseMatrix a(m, m);
    for (int i = 0; i < m; ++i) a(i, i) = 1.0;
    return a;
  }

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows) {
    int r = static_cast<int>(rows.size());
    if (r == 0) throw DimensionError("empty row list");
    int c = static_cast<int>(rows.begin()->size());
    DenseMatrix a(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c)
        throw DimensionError("ragged row list");
      int j = 0;
      for (double v : row) a(i, j++) = v;
      ++i;
    }
    return a;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  // Extract column j (0-based) as an m x 1 matrix.
  DenseMatrix column(int j) const {
    DenseMatrix c(rows_, 1);
    for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  int rows_, cols_;
  std::vector<double> data_;
};

}  // namespace perron
