#include "gtrs/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gtrs {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& message) {
  throw std::runtime_error(name + ": " + message);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Header {
  std::string object, format, field, symmetry;
};

Header read_header(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) fail(name, "empty file");
  std::istringstream hs(line);
  std::string banner;
  Header h;
  hs >> banner >> h.object >> h.format >> h.field >> h.symmetry;
  if (lower(banner) != "%%matrixmarket") fail(name, "missing %%MatrixMarket banner");
  h.object = lower(h.object);
  h.format = lower(h.format);
  h.field = lower(h.field);
  h.symmetry = lower(h.symmetry);
  return h;
}

void skip_comments(std::istream& in, std::string& line, const std::string& name) {
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '%') continue;
    return;
  }
  fail(name, "unexpected end of file before the size line");
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SparseSymmetric read_matrix_market(std::istream& in, const std::string& name) {
  Header h = read_header(in, name);
  if (h.object != "matrix" || h.format != "coordinate") {
    fail(name, "expected a coordinate matrix, got '" + h.object + " " + h.format + "'");
  }
  if (h.field != "real" && h.field != "integer") {
    fail(name, "unsupported field '" + h.field + "' (real expected)");
  }
  if (h.symmetry != "symmetric") {
    fail(name, "matrix must carry the symmetric qualifier, got '" + h.symmetry + "'");
  }

  std::string line;
  skip_comments(in, line, name);
  Index rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz)) fail(name, "malformed size line '" + line + "'");
  }
  if (rows != cols) fail(name, "matrix is not square (" + std::to_string(rows) + "x" +
                                   std::to_string(cols) + ")");

  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(nnz));
  for (Index k = 0; k < nnz; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) {
      fail(name, "entry " + std::to_string(k + 1) + " of " + std::to_string(nnz) +
                     " missing or malformed");
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      fail(name, "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") outside the matrix (1-based indices expected)");
    }
    ts.push_back({i - 1, j - 1, v});
  }
  return SparseSymmetric(rows, std::move(ts));
}

SparseSymmetric read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const SparseSymmetric& m) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.dim() << " " << m.dim() << " " << m.stored_nonzeros() << "\n";
  // Stored triangle is row <= col; Matrix Market symmetric wants the lower
  // triangle, so emit transposed indices.
  for (const auto& t : m.entries()) {
    out << (t.col + 1) << " " << (t.row + 1) << " " << format_value(t.value) << "\n";
  }
}

void write_matrix_market_file(const std::string& path, const SparseSymmetric& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  write_matrix_market(out, m);
}

Vector read_vector_market(std::istream& in, const std::string& name) {
  Header h = read_header(in, name);
  if (h.object != "matrix" || h.format != "array") {
    fail(name, "expected an array-format vector, got '" + h.object + " " + h.format + "'");
  }
  if (h.field != "real" && h.field != "integer") {
    fail(name, "unsupported field '" + h.field + "'");
  }

  std::string line;
  skip_comments(in, line, name);
  Index rows = 0, cols = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> rows >> cols)) fail(name, "malformed size line '" + line + "'");
  }
  if (cols != 1) fail(name, "expected a single column, got " + std::to_string(cols));

  Vector v(rows);
  for (Index k = 0; k < rows; ++k) {
    if (!(in >> v[k])) fail(name, "value " + std::to_string(k + 1) + " of " +
                                      std::to_string(rows) + " missing or malformed");
  }
  return v;
}

Vector read_vector_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  return read_vector_market(in, path);
}

void write_vector_market(std::ostream& out, const Vector& v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (Index i = 0; i < v.size(); ++i) out << format_value(v[i]) << "\n";
}

void write_vector_market_file(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  write_vector_market(out, v);
}

}  // namespace gtrs
