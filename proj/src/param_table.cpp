#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "polyexpm/coeffgen.hpp"

namespace polyexpm {

namespace detail {
// Defined in the generated shipped_tables.cpp, indexed by TableId.
extern const std::string_view kShippedTableText[4];
}  // namespace detail

namespace {

constexpr std::string_view kHeader = "POLYEXPM-TABLE v1";
constexpr std::string_view kChecksumKey = "checksum";

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string checksum_string(std::string_view body) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64(body));
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Hex literal for a value stored at `bits` of precision.
std::string hex_at(const XPReal& v, int bits) {
  XPReal r(v);
  r.set_precision(bits);
  return r.to_hex();
}

std::string hex_of_double(double v) { return XPReal(v, 53).to_hex(); }

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string render(int M, int m, const std::string& theta, const std::string& eps, const std::string& alpha,
                   int precision_bits, const std::vector<std::vector<std::string>>& rows,
                   const std::vector<std::vector<int>>& groups) {
  std::string body;
  auto line = [&body](const std::string& s) {
    body += s;
    body += '\n';
  };
  line("M=" + std::to_string(M));
  line("m=" + std::to_string(m));
  line("theta=" + theta);
  line("eps=" + eps);
  line("alpha=" + alpha);
  line("precision_bits=" + std::to_string(precision_bits));
  for (const auto& row : rows) {
    std::string s;
    for (std::size_t j = 0; j < row.size(); ++j) s += (j ? " " : "") + row[j];
    line(s);
  }

  std::ostringstream out;
  out << kHeader << '\n';
  out << "# E_M(x) = alpha * prod_{i=1..m'} sum_{j=0..m} c[i][j] x^j, one factor per row, c[i][0] first\n";
  if (!groups.empty()) {
    out << "# grouping (quadratic indices by ascending root modulus):";
    for (const auto& g : groups) {
      out << ' ';
      for (std::size_t k = 0; k < g.size(); ++k) out << (k ? "+" : "") << g[k];
    }
    out << '\n';
  }
  out << body;
  out << kChecksumKey << '=' << checksum_string(body) << '\n';
  return out.str();
}

}  // namespace

std::string table_text(const XPParamTable& t) {
  // Double-precision targets are stored exactly as the doubles the evaluator uses.
  const int bits = t.eps_target >= 0x1p-53 ? 53 : t.precision_bits;
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : t.c) {
    std::vector<std::string> r;
    for (const auto& v : row) r.push_back(hex_at(v, bits));
    rows.push_back(std::move(r));
  }
  return render(t.M, t.m, hex_at(t.theta, bits), hex_of_double(t.eps_target), hex_at(t.alpha, bits),
                t.precision_bits, rows, t.groups);
}

void emit_table(const XPParamTable& t, std::ostream& os) { os << table_text(t); }

void emit_table(const XPParamTable& t, const std::filesystem::path& path) { write_text(table_text(t), path); }

void emit_table(const ParamTable& t, std::ostream& os) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : t.c) {
    std::vector<std::string> r;
    for (double v : row) r.push_back(hex_of_double(v));
    rows.push_back(std::move(r));
  }
  os << render(t.M, t.m, hex_of_double(t.theta), hex_of_double(t.eps_target), hex_of_double(t.alpha),
               t.precision_bits, rows, {});
}

void emit_table(const ParamTable& t, const std::filesystem::path& path) {
  std::ostringstream os;
  emit_table(t, os);
  write_text(os.str(), path);
}

XPParamTable load_table_xp(std::istream& is) {
  std::map<std::string, std::pair<std::string, int>> meta;
  std::vector<std::pair<std::vector<std::string>, int>> rows;
  std::string body;
  std::string checksum;
  int checksum_line = 0;
  bool header_seen = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw TableFormatError("expected header '" + std::string(kHeader) + "'", lineno);
      header_seen = true;
      continue;
    }
    if (!checksum.empty()) throw TableFormatError("content after checksum line", lineno);
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == kChecksumKey) {
        checksum = value;
        checksum_line = lineno;
        continue;
      }
      if (!rows.empty()) throw TableFormatError("metadata after coefficient rows", lineno);
      static const char* known[] = {"M", "m", "theta", "eps", "alpha", "precision_bits"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known))
        throw TableFormatError("unknown key '" + key + "'", lineno);
      if (!meta.emplace(key, std::make_pair(value, lineno)).second)
        throw TableFormatError("duplicate key '" + key + "'", lineno);
    } else {
      std::vector<std::string> tokens;
      std::istringstream ss(line);
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      rows.emplace_back(std::move(tokens), lineno);
    }
    body += line;
    body += '\n';
  }
  if (!header_seen) throw TableFormatError("empty table file", 0);
  for (const char* key : {"M", "m", "theta", "eps", "alpha", "precision_bits"}) {
    if (!meta.count(key)) throw TableFormatError(std::string("missing key '") + key + "'", 0);
  }
  if (!checksum.empty() && checksum != checksum_string(body))
    throw TableFormatError("checksum mismatch", checksum_line);

  auto as_int = [&](const std::string& key) {
    const auto& [text, ln] = meta.at(key);
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != text.size() || v < 1) throw TableFormatError("bad integer for '" + key + "'", ln);
    return v;
  };

  XPParamTable t;
  t.M = as_int("M");
  t.m = as_int("m");
  t.precision_bits = as_int("precision_bits");
  const int bits = std::max(t.precision_bits, 64) + 8;
  auto as_real = [&](const std::string& text, int ln) {
    try {
      XPReal v = XPReal::parse(text, bits);
      if (!v.is_finite()) throw std::invalid_argument("non-finite");
      return v;
    } catch (const std::invalid_argument&) {
      throw TableFormatError("bad number '" + text + "'", ln);
    }
  };
  t.theta = as_real(meta.at("theta").first, meta.at("theta").second);
  t.alpha = as_real(meta.at("alpha").first, meta.at("alpha").second);
  t.eps_target = as_real(meta.at("eps").first, meta.at("eps").second).to_double();
  if (!(t.theta > XPReal(0))) throw TableFormatError("theta must be positive", meta.at("theta").second);
  if (!(t.eps_target > 0.0)) throw TableFormatError("eps must be positive", meta.at("eps").second);

  t.m_prime = static_cast<int>(rows.size());
  if (t.M != t.m * t.m_prime) {
    throw TableFormatError("M=" + std::to_string(t.M) + " is not m*m' = " + std::to_string(t.m) + "*" +
                               std::to_string(t.m_prime),
                           0);
  }
  for (const auto& [tokens, ln] : rows) {
    if (static_cast<int>(tokens.size()) != t.m + 1)
      throw TableFormatError("expected " + std::to_string(t.m + 1) + " coefficients", ln);
    std::vector<XPReal> row;
    for (const auto& tok : tokens) row.push_back(as_real(tok, ln));
    if (row.back() != XPReal(1)) throw TableFormatError("factor is not monic (c[i][m] != 1)", ln);
    t.c.push_back(std::move(row));
  }

  // alpha * prod c[i][0] is E_M(0) and must approximate 1.
  XPReal at_zero = t.alpha;
  for (const auto& row : t.c) at_zero *= row.front();
  if (abs(at_zero - XPReal(1)) > XPReal(10.0 * t.eps_target, bits))
    throw TableFormatError("alpha * prod c[i][0] differs from 1 by more than 10 eps", 0);
  return t;
}

XPParamTable load_table_xp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw TableFormatError("cannot open " + path.string(), 0);
  return load_table_xp(is);
}

ParamTable load_table(std::istream& is) { return to_double(load_table_xp(is)); }

ParamTable load_table(const std::filesystem::path& path) { return to_double(load_table_xp(path)); }

std::string table_file_name(TableId id) {
  switch (id) {
    case TableId::M16:
      return "expm_m16.tbl";
    case TableId::M36:
      return "expm_m36.tbl";
    case TableId::M64:
      return "expm_m64.tbl";
    case TableId::M64Quad:
      return "expm_m64_quad.tbl";
  }
  throw std::invalid_argument("table_file_name: unknown id");
}

std::string_view shipped_table_text(TableId id) { return detail::kShippedTableText[static_cast<int>(id)]; }

const XPParamTable& shipped_table_xp(TableId id) {
  static const std::vector<XPParamTable> tables = [] {
    std::vector<XPParamTable> v;
    for (int i = 0; i < 4; ++i) {
      std::istringstream is{std::string(detail::kShippedTableText[i])};
      v.push_back(load_table_xp(is));
    }
    return v;
  }();
  return tables.at(static_cast<std::size_t>(id));
}

const ParamTable& shipped_table(TableId id) {
  static const std::vector<ParamTable> tables = [] {
    std::vector<ParamTable> v;
    for (int i = 0; i < 4; ++i) v.push_back(to_double(shipped_table_xp(static_cast<TableId>(i))));
    return v;
  }();
  return tables.at(static_cast<std::size_t>(id));
}

}  // namespace polyexpm
