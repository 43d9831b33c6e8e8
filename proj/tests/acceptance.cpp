// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
//
//   acceptance [--cli <path to polyexpm>] [--only <n>]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "polyexpm/benchmark.hpp"
#include "polyexpm/coeffgen.hpp"
#include "polyexpm/generators.hpp"
#include "polyexpm/matrix_market.hpp"
#include "polyexpm/oracle.hpp"
#include "polyexpm/pade.hpp"
#include "polyexpm/poly_expm.hpp"
#include "polyexpm/spectral.hpp"
#include "reference_values.hpp"
#include "test_support.hpp"

using namespace polyexpm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const double kEps52 = std::ldexp(1.0, -52);
const double kEps112 = std::ldexp(1.0, -112);

// ---------------------------------------------------------------- 1

using cld = std::complex<long double>;

std::vector<cld> quartic_roots(const std::array<const char*, 4>& row) {
  std::vector<long double> c;
  for (const char* s : row) c.push_back(std::stold(s));
  auto eval = [&](cld z) {
    cld acc = 1.0L;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
  };
  std::vector<cld> z(4);
  for (int k = 0; k < 4; ++k) z[k] = std::pow(cld(0.4L, 0.9L), static_cast<long double>(k)) * 10.0L;
  for (int it = 0; it < 2000; ++it)
    for (int k = 0; k < 4; ++k) {
      cld den = 1.0L;
      for (int j = 0; j < 4; ++j)
        if (j != k) den *= z[k] - z[j];
      z[k] -= eval(z[k]) / den;
    }
  return z;
}

double display_unit(const char* s) {
  const double v = std::abs(std::stod(s));
  return std::pow(10.0, std::floor(std::log10(v)) - 18);
}

Outcome criterion_table2() {
  Stopwatch sw;
  const XPParamTable t = generate_table(16, 1.5, 240);
  const double secs = sw.seconds();
  ScopedPrecision p(240);

  int matched = 0;
  double worst_units = 0;
  auto compare = [&](const XPReal& v, const char* s) {
    const double units = abs(v - XPReal::parse(s, 240)).to_double() / display_unit(s);
    worst_units = std::max(worst_units, units);
    if (units <= 1.0) ++matched;
  };
  compare(t.alpha, reference::kAlpha16);
  bool monic = true;
  for (int i = 0; i < 4; ++i) {
    monic = monic && t.c[i][4] == XPReal(1);
    for (int j = 0; j < 4; ++j) compare(t.c[i][j], reference::kFactors16[i][j]);
  }

  const auto roots = find_roots(derive_monomial(16, 1.5, 240));
  double worst_root = 0;
  for (const auto& row : reference::kFactors16)
    for (const cld& z : quartic_roots(row)) {
      double best = INFINITY;
      for (const auto& r : roots) {
        const cld d(r.re.to_double(), r.im.to_double());
        best = std::min(best, static_cast<double>(std::abs(d - z) / std::abs(z)));
      }
      worst_root = std::max(worst_root, best);
    }

  Outcome o;
  o.pass = matched == 17 && monic && secs < 60.0 && worst_root <= 1e-12;
  o.detail = std::to_string(matched) + "/17 values within one final digit (worst " + fmt("%.2f", worst_units) +
             " digit units), root multiset rel. diff " + fmt("%.1e", worst_root) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------- 2

Outcome criterion_mm_counts() {
  Outcome o;
  std::ostringstream d;
  const auto& ts = TableSet::shipped();
  for (const ParamTable* t : {&ts.m16, &ts.m36, &ts.m64}) {
    MulCounter c;
    eval_product(DenseMatrix(5), *t, c);
    const long expect = 2 * (static_cast<long>(std::lround(std::sqrt(t->M))) - 1);
    o.pass = o.pass && c.count == expect;
    d << "E" << t->M << "=" << c.count << " ";
  }
  // Skew-symmetric inputs keep e^x orthogonal, so no squaring overflows;
  // diagonal ones sit exactly on the thresholds.
  std::vector<DenseMatrix> inputs;
  for (double norm : {0.5, 1.4, 3.0, 9.0, 20.0, 100.0, 1e3, 1e4}) {
    const auto a = testing::random_matrix(6, 31, 1.0);
    const auto skew = a - [&] {
      DenseMatrix t(6);
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) t(i, j) = a(j, i);
      return t;
    }();
    inputs.push_back((norm / one_norm(skew)) * skew);
  }
  for (double edge : {1.5, 9.75, 19.5}) inputs.push_back(DenseMatrix{{edge, 0}, {0, -0.5}});
  for (const auto& x : inputs) {
    const double norm = one_norm(x);
    const long base = norm <= 1.5 ? 6 : 10;
    const int k = norm <= 9.75 ? 0 : static_cast<int>(std::ceil(std::log2(norm / 9.75)));
    const auto rep = expm(x);
    const bool ok = !rep.overflow && rep.scaling_k == k && rep.mm_count == base + k;
    o.pass = o.pass && ok;
    d << "|x|=" << norm << ":" << rep.mm_count << (k ? "(k=" + std::to_string(k) + ")" : "") << (ok ? " " : "! ");
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 3

double span_error_double(const ParamTable& t) {
  ScopedPrecision p(200);
  double worst = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = -t.theta + 2.0 * t.theta * i / 1000.0;
    const XPReal ex = exp(XPReal(x));
    worst = std::max(worst, abs((XPReal(eval_product_scalar(x, t)) - ex) / ex).to_double());
  }
  return worst;
}

// The quad row in 113-bit arithmetic with coefficients rounded to 113 bits.
double span_error_quad(const XPParamTable& t) {
  constexpr int kQuad = 113;
  auto q = [](const XPReal& v) {
    XPReal r(v);
    r.set_precision(kQuad);
    return r;
  };
  const XPReal alpha = q(t.alpha);
  std::vector<std::vector<XPReal>> c;
  for (const auto& row : t.c) {
    std::vector<XPReal> r;
    for (const auto& v : row) r.push_back(q(v));
    c.push_back(std::move(r));
  }
  const double theta = t.theta.to_double();
  double worst = 0;
  for (int i = 0; i <= 1000; ++i) {
    ScopedPrecision p(kQuad);
    const XPReal x = q(XPReal(-theta, 256) + XPReal(2.0 * theta, 256) * XPReal(i, 256) / XPReal(1000, 256));
    // powers, factor sums, product, as the matrix evaluator does
    std::vector<XPReal> pw{XPReal(1), x};
    for (int j = 2; j <= t.m; ++j) pw.push_back(pw.back() * x);
    XPReal acc(0);
    for (std::size_t r = 0; r < c.size(); ++r) {
      const XPReal scale = r == 0 ? alpha : XPReal(1);
      XPReal f(0);
      for (int j = 1; j <= t.m; ++j) f += scale * c[r][j] * pw[j];
      f += scale * c[r][0];
      acc = r == 0 ? f : acc * f;
    }
    ScopedPrecision hp(300);
    XPReal xh(x);
    xh.set_precision(300);
    const XPReal ex = exp(xh);
    worst = std::max(worst, abs((acc - ex) / ex).to_double());
  }
  return worst;
}

Outcome criterion_span_accuracy() {
  Stopwatch sw;
  Outcome o;
  std::ostringstream d;
  struct Row {
    TableId id;
    const char* name;
  };
  for (const Row& r : {Row{TableId::M16, "M16/1.5"}, Row{TableId::M36, "M36/9.75"}, Row{TableId::M64, "M64/20.25"}}) {
    const double err = span_error_double(shipped_table(r.id));
    const bool ok = err <= 50 * kEps52;
    o.pass = o.pass && ok;
    d << r.name << " " << fmt("%.1f", err / kEps52) << "eps" << (ok ? "" : "(>50)") << ", ";
  }
  const double quad = span_error_quad(shipped_table_xp(TableId::M64Quad));
  const bool ok = quad <= 50 * kEps112;
  o.pass = o.pass && ok;
  d << "M64/12 quad " << fmt("%.2f", quad / kEps112) << "eps112" << (ok ? "" : "(>50)") << ", "
    << fmt("%.2f", sw.seconds()) << " s";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 4

Outcome criterion_pade_identity() {
  double worst_single = 0, worst_chain = 0;
  for (int m : {2, 3, 5}) {
    for (double x : {-0.9, -0.3, -0.1, 0.1, 0.3, 0.9}) {
      const double one = spectral::propagate_elements(-x, 1, m, 1.0);
      worst_single = std::max(worst_single, std::abs(one - pade_scalar(m, x)));
      for (int k : {2, 4}) {
        const double chained = spectral::propagate_elements(-x, k, m, 1.0);
        const double ref = std::pow(pade_scalar(m, x / k), k);
        worst_chain = std::max(worst_chain, std::abs(chained - ref));
      }
    }
  }
  Outcome o;
  o.pass = worst_single <= 1e-13 && worst_chain <= 1e-12;
  o.detail = "single element max diff " + fmt("%.1e", worst_single) + ", k-element max diff " +
             fmt("%.1e", worst_chain);
  return o;
}

// ---------------------------------------------------------------- 5

Outcome criterion_matrix_accuracy() {
  Stopwatch sw;
  const int jobs = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  std::vector<MatrixSource> random;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> size(2, 50);
  for (int i = 0; i < 200; ++i) {
    const double norm = 0.1 * std::pow(500.0, i / 199.0);
    const auto n = static_cast<std::size_t>(size(rng));
    random.push_back({"r" + std::to_string(i), "random", testing::random_matrix(n, rng(), norm)});
  }
  BenchOptions opt;
  opt.methods = {"poly"};
  opt.jobs = jobs;
  const auto rec = run_benchmark(random, opt);
  std::vector<double> errs;
  bool all_valid = true;
  for (const auto& r : rec) {
    all_valid = all_valid && !r.overflow_poly && std::isfinite(r.err_poly);
    errs.push_back(r.err_poly);
  }
  std::vector<double> sorted = errs;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[99] + sorted[100]);
  const double mx = sorted.back();

  // High-norm sweep up to 1e4, n = 8.
  std::vector<MatrixSource> sweep;
  for (int i = 0; i < 40; ++i) {
    const double norm = std::pow(1e4, i / 39.0);
    sweep.push_back(generated_source("scaled:randn:" + std::to_string(norm), 8, 500 + i));
  }
  const auto hi = run_benchmark(sweep, opt);
  int genuine_overflow = 0, failures = 0;
  std::vector<double> hn, he;
  double worst_hi = 0;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    const DenseMatrix ref = oracle_expm(sweep[i].matrix);
    if (!ref.all_finite()) {
      ++genuine_overflow;
      continue;
    }
    if (hi[i].overflow_poly || !std::isfinite(hi[i].err_poly) || hi[i].err_poly > 1e-8) {
      ++failures;
      continue;
    }
    hn.push_back(hi[i].norm1);
    he.push_back(hi[i].err_poly);
    worst_hi = std::max(worst_hi, hi[i].err_poly);
  }
  const double rho = hn.size() >= 3 ? spearman(hn, he) : 0.0;
  const double secs = sw.seconds();

  Outcome o;
  o.pass = all_valid && median <= 1e-14 && mx <= 1e-12 && failures == 0 && rho > 0.5 && secs < 300.0;
  o.detail = "200 random: median " + fmt("%.2e", median) + ", max " + fmt("%.2e", mx) + "; sweep to 1e4: " +
             std::to_string(failures) + " failures, " + std::to_string(genuine_overflow) +
             " double overflows, max err " + fmt("%.1e", worst_hi) + ", rank corr " + fmt("%.2f", rho) + "; " +
             fmt("%.1f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------- 6

Outcome criterion_exact_cases() {
  struct Case {
    std::string name;
    DenseMatrix x;
    DenseMatrix exact;
  };
  std::vector<Case> cases;
  cases.push_back({"zero 4x4", DenseMatrix(4), DenseMatrix::identity(4)});
  cases.push_back({"nilpotent 2x2", DenseMatrix{{0, 1}, {0, 0}}, DenseMatrix{{1, 1}, {0, 1}}});
  cases.push_back({"nilpotent 3x3", DenseMatrix{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}},
                   DenseMatrix{{1, 1, 0.5}, {0, 1, 1}, {0, 0, 1}}});
  cases.push_back({"nilpotent 3x3 dense", DenseMatrix{{0, 2, -1}, {0, 0, 3}, {0, 0, 0}},
                   DenseMatrix{{1, 2, 2}, {0, 1, 3}, {0, 0, 1}}});
  for (const std::vector<double>& d :
       {std::vector<double>{1, 2}, {-0.5, 0.25, 1.25}, {-1, 0, 3, 7}, {-4, -2, 5, 9.5}, {0.1, -0.1}}) {
    std::vector<double> e;
    for (double v : d) e.push_back(std::exp(v));
    std::string name = "diag(";
    for (std::size_t i = 0; i < d.size(); ++i) name += (i ? "," : "") + fmt("%g", d[i]);
    cases.push_back({name + ")", DenseMatrix::diagonal(d), DenseMatrix::diagonal(e)});
  }
  Outcome o;
  double worst = 0;
  std::string worst_name;
  for (const auto& c : cases) {
    const double err = rel_error_1norm(expm(c.x).result, c.exact);
    if (err > worst) {
      worst = err;
      worst_name = c.name;
    }
    if (err > 1e-15) {
      o.pass = false;
      o.detail += c.name + " err " + fmt("%.2e", err) + "; ";
    }
  }
  o.detail += std::to_string(cases.size()) + " cases, worst " + fmt("%.2e", worst) + " (" + worst_name + ")";
  return o;
}

// ---------------------------------------------------------------- 7

// Real root of R_5(-z) by Newton iteration from 7.
double pade5_denominator_root() {
  const auto pc = pade_coeffs(5);
  double z = 7.0;
  for (int it = 0; it < 50; ++it) {
    double f = 0, df = 0;
    for (int mu = 5; mu >= 0; --mu) {
      df = df * (-z) + f;
      f = f * (-z) + pc.r[mu];
    }
    z += f / df;  // d/dz R(-z) = -R'(-z)
  }
  return z;
}

Outcome criterion_robustness() {
  // A sparse, low-norm 6x6 matrix with one eigenvalue next to the real pole
  // of the order-5 diagonal Pade approximant.
  const double pole = pade5_denominator_root();
  DenseMatrix x(6);
  x(0, 0) = pole * (1 + 4e-13);
  x(0, 3) = 1e-3;
  x(1, 1) = -0.5;
  x(2, 4) = 0.25;
  x(5, 5) = 1.0;
  const int m = 5;
  double cond = 0;
  bool pade_failed = false;
  try {
    cond = pade_expm_scaled(x, m, kDefaultPadeTheta).condition;
  } catch (const SingularDenominatorError& e) {
    cond = e.condition();
    pade_failed = true;
  }
  const auto ref = oracle_expm(x);
  const auto poly = expm(x);
  const double err = rel_error_1norm(poly.result, ref);

  Outcome o;
  o.pass = cond > 1e12 && !poly.overflow && err <= 1e-12;
  o.detail = "pade:5 at theta 11 on a 6x6 matrix with 5 nonzeros, ||x||_1 = " + fmt("%.3f", one_norm(x)) +
             ": denominator cond " + fmt("%.2e", cond) + (pade_failed ? " (solve refused)" : "") +
             "; poly-expm err " + fmt("%.2e", err);
  return o;
}

// ---------------------------------------------------------------- 8

Outcome criterion_parser() {
  struct Accept {
    std::string text;
    DenseMatrix expect;
  };
  struct Reject {
    std::string text;
    int line;
  };
  const std::string hdr = "%%MatrixMarket matrix ";
  const std::vector<Accept> accept{
      {hdr + "coordinate real general\n2 2 2\n1 1 1.0\n2 2 1.0\n", DenseMatrix::identity(2)},
      {hdr + "coordinate real general\n% comment\n2 2 3\n1 2 -2.5\n2 1 4e-3\n1 2 0.5\n", DenseMatrix{{0, -2}, {4e-3, 0}}},
      {hdr + "coordinate real symmetric\n2 2 2\n2 1 3.0\n1 1 1\n", DenseMatrix{{1, 3}, {3, 0}}},
      {hdr + "coordinate real skew-symmetric\n3 3 2\n2 1 3.0\n3 2 -1\n", DenseMatrix{{0, -3, 0}, {3, 0, 1}, {0, -1, 0}}},
      {hdr + "array real general\n2 2\n1\n3\n2\n4\n", DenseMatrix{{1, 2}, {3, 4}}},
      {hdr + "array real general\n% c\n3 3\n1 0 0\n0 1 0\n0 0 1\n", DenseMatrix::identity(3)},
      {"%%MatrixMarket MATRIX COORDINATE REAL GENERAL\n1 1 1\n1 1 2\n", DenseMatrix{{2}}},
  };
  const std::vector<Reject> reject{
      {"", 1},
      {"%%MatrixMarket matrix coordinate\n1 1 0\n", 1},
      {hdr + "coordinate pattern general\n1 1 0\n", 1},
      {hdr + "coordinate complex general\n1 1 0\n", 1},
      {hdr + "coordinate real hermitian\n1 1 0\n", 1},
      {hdr + "array real symmetric\n1 1\n1\n", 1},
      {hdr + "coordinate real general\n2 3 0\n", 2},
      {hdr + "coordinate real general\n2 2 1\n3 1 1.0\n", 3},
      {hdr + "coordinate real general\n2 2 1\n1 0 1.0\n", 3},
      {hdr + "coordinate real general\n2 2 2\n1 1 1.0\n", 3},
      {hdr + "coordinate real general\n2 2 1\n1 1 x\n", 3},
      {hdr + "array real general\n2 2\n1\n2\n3\n", 5},
      {hdr + "array real general\n2 2\n1\n2\n3\n4\n5\n", 7},
  };
  int passed = 0;
  for (const auto& a : accept) {
    try {
      std::istringstream is(a.text);
      if (parse_matrix_market(is) == a.expect) ++passed;
    } catch (const std::exception&) {
    }
  }
  for (const auto& r : reject) {
    try {
      std::istringstream is(r.text);
      parse_matrix_market(is);
    } catch (const MatrixMarketError& e) {
      if (e.line() == r.line) ++passed;
    }
  }
  int round_trip = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto a = generate("randn", 9, seed);
    std::ostringstream os;
    write_matrix_market(a, os, seed % 2 ? MatrixMarketLayout::Coordinate : MatrixMarketLayout::Array);
    std::istringstream is(os.str());
    if (parse_matrix_market(is) == a) ++round_trip;
  }
  const int total = static_cast<int>(accept.size() + reject.size());
  Outcome o;
  o.pass = passed == total && round_trip == 10;
  o.detail = std::to_string(passed) + "/" + std::to_string(total) + " conformance cases, " +
             std::to_string(round_trip) + "/10 bit-exact round trips";
  return o;
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome criterion_determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.pass = false;
    o.detail = "no --cli given";
    return o;
  }
  const fs::path dir = fs::temp_directory_path() / ("polyexpm_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  bool ran = true;
  for (int i : {1, 2}) {
    const std::string s = std::to_string(i);
    ran = ran && run("gen-params --M 16 --theta 1.5 --bits 240 --out " + (dir / ("t16_" + s)).string());
    ran = ran && run("gen-params --M 36 --theta 9.75 --bits 240 --out " + (dir / ("t36_" + s)).string());
    ran = ran && run("bench --suite builtin --clamp-plot-columns --out " + (dir / ("b_" + s)).string());
  }
  ran = ran && run("bench --suite builtin --clamp-plot-columns --jobs 4 --out " + (dir / "b_j4").string());
  const bool t16 = slurp(dir / "t16_1") == slurp(dir / "t16_2") && !slurp(dir / "t16_1").empty();
  const bool t36 = slurp(dir / "t36_1") == slurp(dir / "t36_2") && !slurp(dir / "t36_1").empty();
  const bool b = slurp(dir / "b_1") == slurp(dir / "b_2") && !slurp(dir / "b_1").empty();
  const bool bj = slurp(dir / "b_1") == slurp(dir / "b_j4");
  fs::remove_all(dir);
  o.pass = ran && t16 && t36 && b && bj;
  o.detail = std::string("gen-params M16 ") + (t16 ? "identical" : "DIFFERENT") + ", M36 " +
             (t36 ? "identical" : "DIFFERENT") + ", bench " + (b ? "identical" : "DIFFERENT") + ", bench --jobs 4 " +
             (bj ? "identical" : "DIFFERENT") + (ran ? "" : " (a CLI run failed)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--cli <polyexpm>] [--only <n>]...\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "M=16 parameter reproduction", criterion_table2},
      {2, "multiplication counts", criterion_mm_counts},
      {3, "span accuracy of the shipped tables", criterion_span_accuracy},
      {4, "spectral solve equals diagonal Pade", criterion_pade_identity},
      {5, "matrix accuracy against the oracle", criterion_matrix_accuracy},
      {6, "exact cases", criterion_exact_cases},
      {7, "robustness contrast with Pade", criterion_robustness},
      {8, "Matrix Market conformance", criterion_parser},
      {9, "determinism of gen-params and bench", [&] { return criterion_determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criterion(s) failed" : "acceptance: all passed")
            << std::endl;
  return failed ? 1 : 0;
}
