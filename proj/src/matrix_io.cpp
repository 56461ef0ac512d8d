#include "perron/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace perron {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, long line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("invalid numeric value '" + tok + "'", line);
  return v;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

DenseMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line))
    throw ParseError("empty file where a Matrix Market header was expected",
                     1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    if (lower(banner) != "%%matrixmarket")
      throw ParseError("missing %%MatrixMarket banner", lineno);
    if (lower(object) != "matrix" || lower(fmt) != "array")
      throw UnsupportedFormatError(
          "only dense 'matrix array' Matrix Market files are supported");
    std::string f = lower(field);
    if (f != "real" && f != "integer")
      throw UnsupportedFormatError("unsupported Matrix Market field '" +
                                   field + "'; only real values are handled");
    if (lower(symmetry) != "general")
      throw UnsupportedFormatError("unsupported Matrix Market symmetry '" +
                                   symmetry + "'; only 'general' is handled");
  }

  // Skip comments and blank lines up to the size line.
  int rows = 0, cols = 0;
  for (;;) {
    if (!std::getline(in, line))
      throw ParseError("unexpected end of file before the size line",
                       lineno + 1);
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream ss(t);
    std::string a, b, extra;
    ss >> a >> b;
    if (a.empty() || b.empty() || (ss >> extra))
      throw ParseError("size line must hold exactly two integers", lineno);
    try {
      std::size_t pa = 0, pb = 0;
      rows = std::stoi(a, &pa);
      cols = std::stoi(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("size line must hold exactly two integers", lineno);
    }
    break;
  }
  if (rows < 1 || cols < 1)
    throw ParseError("matrix dimensions must be positive", lineno);

  DenseMatrix a(rows, cols);
  long need = static_cast<long>(rows) * cols;
  long got = 0;
  while (got < need) {
    if (!std::getline(in, line))
      throw ParseError("unexpected end of file: expected " +
                           std::to_string(need) + " values, found " +
                           std::to_string(got),
                       lineno + 1);
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream ss(t);
    std::string tok;
    while (ss >> tok) {
      if (got >= need)
        throw ParseError("more values than the size line declares", lineno);
      double v = parse_number(tok, lineno);
      // Column-major storage order in the file.
      a(static_cast<int>(got % rows), static_cast<int>(got / rows)) = v;
      ++got;
    }
  }
  // Anything non-comment after the data is an error.
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (!t.empty() && t[0] != '%')
      throw ParseError("trailing content after the matrix values", lineno);
  }
  return a;
}

DenseMatrix parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = t.find(',', pos);
      std::string cell = trim(t.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (cell.empty())
        throw ParseError("empty cell", lineno);
      row.push_back(parse_number(cell, lineno));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) +
                           " cells but the first row has " +
                           std::to_string(rows.front().size()),
                       lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows found", lineno);
  DenseMatrix a(static_cast<int>(rows.size()),
                static_cast<int>(rows.front().size()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
  return a;
}

DenseMatrix read_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  if (format == MatrixFormat::kAuto) {
    std::string first;
    std::getline(in, first);
    in.clear();
    in.seekg(0);
    format = (lower(trim(first)).rfind("%%matrixmarket", 0) == 0)
                 ? MatrixFormat::kMatrixMarket
                 : MatrixFormat::kCsv;
  }
  return format == MatrixFormat::kMatrixMarket ? parse_matrix_market(in)
                                               : parse_csv(in);
}

std::string format_matrix_market(const DenseMatrix& a) {
  std::ostringstream out;
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << " " << a.cols() << "\n";
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) out << format_value(a(i, j)) << "\n";
  return out.str();
}

std::string format_csv(const DenseMatrix& a) {
  std::ostringstream out;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (j) out << ",";
      out << format_value(a(i, j));
    }
    out << "\n";
  }
  return out.str();
}

void write_matrix(const std::string& path, const DenseMatrix& a,
                  MatrixFormat format) {
  if (format == MatrixFormat::kAuto) {
    format = (path.size() >= 4 && path.substr(path.size() - 4) == ".mtx")
                 ? MatrixFormat::kMatrixMarket
                 : MatrixFormat::kCsv;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << (format == MatrixFormat::kMatrixMarket ? format_matrix_market(a)
                                                : format_csv(a));
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace perron
