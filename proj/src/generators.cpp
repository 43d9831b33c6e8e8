#include "polyexpm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "polyexpm/matrix_market.hpp"

namespace polyexpm {

namespace {

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, ':')) parts.push_back(cur);
  if (!s.empty() && s.back() == ':') parts.emplace_back();
  return parts;
}

double parse_param(const std::string& text, const std::string& name) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw UnknownGeneratorError("bad parameter '" + text + "' in '" + name + "'");
  return v;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

DenseMatrix generate(const std::string& name, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate: size must be positive");
  if (name.rfind("scaled:", 0) == 0) {
    const auto last = name.rfind(':');
    if (last <= 7) throw UnknownGeneratorError("scaled generator needs 'scaled:<name>:<norm>': '" + name + "'");
    const std::string inner = name.substr(7, last - 7);
    const double target = parse_param(name.substr(last + 1), name);
    if (!(target >= 0.0)) throw UnknownGeneratorError("scaled target norm must be nonnegative");
    DenseMatrix a = generate(inner, n, seed);
    const double norm = one_norm(a);
    if (norm == 0.0) return a;
    return (target / norm) * a;
  }

  const auto parts = split_colon(name);
  const std::string& base = parts.front();
  DenseMatrix a(n);
  if (base == "randn" && parts.size() == 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (double& v : a.data()) v = s * dist(rng);
  } else if (base == "jordan" && parts.size() <= 2) {
    const double lambda = parts.size() == 2 ? parse_param(parts[1], name) : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i) = lambda;
      if (i + 1 < n) a(i, i + 1) = 1.0;
    }
  } else if (base == "nilpotent" && parts.size() == 1) {
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  } else if (base == "diag-range" && (parts.size() == 1 || parts.size() == 3)) {
    const double lo = parts.size() == 3 ? parse_param(parts[1], name) : -1.0;
    const double hi = parts.size() == 3 ? parse_param(parts[2], name) : 1.0;
    for (std::size_t i = 0; i < n; ++i)
      a(i, i) = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  } else {
    throw UnknownGeneratorError("unknown generator '" + name + "'");
  }
  return a;
}

MatrixSource generated_source(const std::string& name, std::size_t n, std::uint64_t seed) {
  return {name + "/n" + std::to_string(n) + "/s" + std::to_string(seed),
          name + " seed=" + std::to_string(seed) + " n=" + std::to_string(n), generate(name, n, seed)};
}

std::vector<MatrixSource> load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mtx") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<MatrixSource> out;
  for (const auto& f : files) out.push_back({f.filename().string(), f.string(), parse_matrix_market(f)});
  return out;
}

std::vector<MatrixSource> builtin_suite() {
  std::vector<MatrixSource> out;
  std::uint64_t seed = 1;
  for (double norm : {0.1, 1.0, 1.5, 5.0, 9.75, 20.0, 100.0, 1000.0})
    out.push_back(generated_source("scaled:randn:" + format_number(norm), 8, seed++));
  for (std::size_t n : {2, 3, 8}) out.push_back(generated_source("nilpotent", n, 0));
  out.push_back(generated_source("jordan:0.5", 8, 0));
  out.push_back(generated_source("jordan:-3", 8, 0));
  out.push_back(generated_source("diag-range", 8, 0));
  out.push_back(generated_source("diag-range:-20:20", 8, 0));
  out.push_back(generated_source("scaled:jordan:-1:12", 16, 0));
  return out;
}

}  // namespace polyexpm
