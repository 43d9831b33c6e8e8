#include "polyexpm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace polyexpm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Next line that is neither a comment nor blank; false at end of input.
bool next_data_line(std::istream& is, std::string& line, int& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '%' || blank(line)) continue;
    return true;
  }
  return false;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

long parse_index(const std::string& tok, int lineno) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) throw MatrixMarketError("bad integer '" + tok + "'", lineno);
  return v;
}

double parse_value(const std::string& tok, int lineno) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) throw MatrixMarketError("bad value '" + tok + "'", lineno);
  return v;
}

}  // namespace

DenseMatrix parse_matrix_market(std::istream& is) {
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw MatrixMarketError("empty input", 1);
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto head = split(line);
  if (head.size() != 5 || head[0] != "%%MatrixMarket")
    throw MatrixMarketError("malformed header, expected '%%MatrixMarket matrix <format> <field> <symmetry>'", lineno);
  const std::string object = lower(head[1]);
  const std::string format = lower(head[2]);
  const std::string field = lower(head[3]);
  const std::string symmetry = lower(head[4]);
  if (object != "matrix") throw MatrixMarketError("unsupported object '" + head[1] + "'", lineno);
  if (format != "coordinate" && format != "array") throw MatrixMarketError("unsupported format '" + head[2] + "'", lineno);
  if (field != "real" && field != "integer")
    throw MatrixMarketError("unsupported field '" + head[3] + "' (only real matrices are accepted)", lineno);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw MatrixMarketError("unsupported symmetry '" + head[4] + "'", lineno);
  if (format == "array" && symmetry != "general")
    throw MatrixMarketError("array format is only supported as general", lineno);

  if (!next_data_line(is, line, lineno)) throw MatrixMarketError("missing size line", lineno + 1);
  const auto size = split(line);
  const std::size_t expected_size_tokens = format == "coordinate" ? 3 : 2;
  if (size.size() != expected_size_tokens) throw MatrixMarketError("malformed size line", lineno);
  const long rows = parse_index(size[0], lineno);
  const long cols = parse_index(size[1], lineno);
  if (rows <= 0 || cols <= 0) throw MatrixMarketError("matrix dimensions must be positive", lineno);
  if (rows != cols) throw MatrixMarketError("matrix is not square", lineno);
  const auto n = static_cast<std::size_t>(rows);
  DenseMatrix a(n);

  if (format == "array") {
    std::size_t filled = 0;
    while (filled < n * n) {
      if (!next_data_line(is, line, lineno))
        throw MatrixMarketError("expected " + std::to_string(n * n) + " values, got " + std::to_string(filled), lineno);
      for (const auto& tok : split(line)) {
        if (filled == n * n) throw MatrixMarketError("too many values", lineno);
        const std::size_t col = filled / n;
        const std::size_t row = filled % n;
        a(row, col) = parse_value(tok, lineno);
        ++filled;
      }
    }
  } else {
    const long nnz = parse_index(size[2], lineno);
    if (nnz < 0) throw MatrixMarketError("negative entry count", lineno);
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(is, line, lineno))
        throw MatrixMarketError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(e), lineno);
      const auto tok = split(line);
      if (tok.size() != 3) throw MatrixMarketError("expected 'row col value'", lineno);
      const long i = parse_index(tok[0], lineno);
      const long j = parse_index(tok[1], lineno);
      const double v = parse_value(tok[2], lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) throw MatrixMarketError("index out of bounds", lineno);
      const auto r = static_cast<std::size_t>(i - 1);
      const auto c = static_cast<std::size_t>(j - 1);
      if (symmetry == "skew-symmetric") {
        if (r == c) continue;  // skew diagonal is zero
        a(r, c) += v;
        a(c, r) -= v;
      } else {
        a(r, c) += v;
        if (symmetry == "symmetric" && r != c) a(c, r) += v;
      }
    }
  }
  if (next_data_line(is, line, lineno)) throw MatrixMarketError("unexpected data after last entry", lineno);
  return a;
}

DenseMatrix parse_matrix_market(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return parse_matrix_market(is);
}

void write_matrix_market(const DenseMatrix& a, std::ostream& os, MatrixMarketLayout layout) {
  const std::size_t n = a.n();
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  if (layout == MatrixMarketLayout::Array) {
    os << "%%MatrixMarket matrix array real general\n" << n << ' ' << n << '\n';
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) os << fmt(a(i, j)) << '\n';
    return;
  }
  std::size_t nnz = 0;
  for (double v : a.data()) nnz += v != 0.0;
  os << "%%MatrixMarket matrix coordinate real general\n" << n << ' ' << n << ' ' << nnz << '\n';
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (a(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << fmt(a(i, j)) << '\n';
}

void write_matrix_market(const DenseMatrix& a, const std::filesystem::path& path, MatrixMarketLayout layout) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix_market(a, os, layout);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace polyexpm
