#include "polyexpm/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

namespace polyexpm {

namespace {

int parse_pade_order(const std::string& method) {
  if (method == "pade") return kDefaultPadeOrder;
  const std::string digits = method.substr(5);
  std::size_t pos = 0;
  int m = 0;
  try {
    m = std::stoi(digits, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != digits.size()) throw std::invalid_argument("bad method '" + method + "'");
  return m;
}

struct MethodSet {
  bool poly = false;
  int pade_order = 0;  // 0: not requested
};

MethodSet parse_methods(const std::vector<std::string>& methods) {
  MethodSet set;
  for (const auto& m : methods) {
    if (m == "poly") {
      set.poly = true;
    } else if (m == "pade" || m.rfind("pade:", 0) == 0) {
      set.pade_order = parse_pade_order(m);
      pade_coeffs(set.pade_order);  // range check
    } else {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
  }
  return set;
}

// Error of a finished evaluation against the oracle.
double score(const DenseMatrix& result, bool overflow, const DenseMatrix& oracle, bool oracle_ok) {
  if (overflow) return 1.0;
  if (!oracle_ok) return NAN;
  if (!(one_norm(oracle) > 0.0)) return NAN;
  return rel_error_1norm(result, oracle);
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "invalid";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ErrorRecord benchmark_one(const MatrixSource& source, const BenchOptions& options) {
  const MethodSet methods = parse_methods(options.methods);
  const DenseMatrix& x = source.matrix;
  ErrorRecord rec;
  rec.id = source.id;
  rec.n = x.n();
  rec.norm1 = one_norm(x);
  rec.err_poly = NAN;
  rec.err_pade = NAN;

  DenseMatrix oracle;
  bool oracle_ok = false;
  try {
    oracle = oracle_expm(x, options.oracle_bits);
    oracle_ok = oracle.all_finite();
  } catch (const std::exception&) {
    oracle_ok = false;
  }

  if (methods.poly) {
    try {
      const EvalReport rep = expm(x, options.expm);
      rec.overflow_poly = rep.overflow;
      rec.mm_count = rep.mm_count;
      rec.scaling_k = rep.scaling_k;
      rec.err_poly = score(rep.result, rep.overflow, oracle, oracle_ok);
    } catch (const std::exception&) {
      rec.overflow_poly = true;
      rec.err_poly = 1.0;
    }
  }
  if (methods.pade_order > 0) {
    try {
      const PadeReport rep = pade_expm_scaled(x, methods.pade_order, options.pade_theta);
      rec.overflow_pade = rep.overflow;
      rec.pade_condition = rep.condition;
      rec.err_pade = score(rep.result, rep.overflow, oracle, oracle_ok);
    } catch (const SingularDenominatorError& e) {
      rec.overflow_pade = true;
      rec.pade_condition = e.condition();
      rec.err_pade = 1.0;
    } catch (const std::exception&) {
      rec.overflow_pade = true;
      rec.err_pade = 1.0;
    }
  }
  return rec;
}

std::vector<ErrorRecord> run_benchmark(const std::vector<MatrixSource>& sources, const BenchOptions& options) {
  if (sources.empty()) throw std::invalid_argument("run_benchmark: no sources");
  parse_methods(options.methods);
  std::vector<ErrorRecord> records(sources.size());
  const int jobs = std::clamp(options.jobs, 1, static_cast<int>(sources.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sources.size(); i = next++) records[i] = benchmark_one(sources[i], options);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  return records;
}

double plot_log10_error(double err, bool overflow) {
  if (overflow) return 0.0;
  if (std::isnan(err)) return NAN;
  return std::log10(std::max(err, kPlotErrorFloor));
}

void emit_csv(const std::vector<ErrorRecord>& records, std::ostream& os, bool plot_clamp) {
  os << "id,n,norm1,err_poly,err_pade,overflow_poly,overflow_pade,mm_count,scaling_k";
  if (plot_clamp) os << ",plot_log10_err_poly,plot_log10_err_pade";
  os << '\n';
  for (const auto& r : records) {
    os << r.id << ',' << r.n << ',' << fmt_double(r.norm1) << ',' << fmt_double(r.err_poly) << ','
       << fmt_double(r.err_pade) << ',' << (r.overflow_poly ? 1 : 0) << ',' << (r.overflow_pade ? 1 : 0) << ','
       << r.mm_count << ',' << r.scaling_k;
    if (plot_clamp) {
      os << ',' << fmt_double(plot_log10_error(r.err_poly, r.overflow_poly)) << ','
         << fmt_double(plot_log10_error(r.err_pade, r.overflow_pade));
    }
    os << '\n';
  }
}

void emit_csv(const std::vector<ErrorRecord>& records, const std::filesystem::path& path, bool plot_clamp) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_csv(records, os, plot_clamp);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ErrorRecord> sort_by_norm(std::vector<ErrorRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ErrorRecord& a, const ErrorRecord& b) { return a.norm1 < b.norm1; });
  return records;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace polyexpm
