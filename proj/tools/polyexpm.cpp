// polyexpm command-line front end.
//
//   polyexpm gen-params --M 16 --theta 1.5 --bits 240 --out expm_m16.tbl
//   polyexpm expm --in a.mtx [--method poly|pade:m|oracle] [--table t.tbl] --out expa.mtx
//   polyexpm bench --dir corpus/ | --suite builtin --out errors.csv [--clamp-plot-columns] [--jobs N]
//
// Exit status: 0 on success, 2 on bad input (arguments, files, formats),
// 1 on any other failure. POLYEXPM_TABLE_DIR replaces the built-in tables.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "polyexpm/benchmark.hpp"
#include "polyexpm/coeffgen.hpp"
#include "polyexpm/generators.hpp"
#include "polyexpm/matrix_market.hpp"
#include "polyexpm/oracle.hpp"
#include "polyexpm/pade.hpp"
#include "polyexpm/poly_expm.hpp"

namespace fs = std::filesystem;
using namespace polyexpm;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitFailure = 1;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<TableSet> env_tables() {
  const char* dir = std::getenv("POLYEXPM_TABLE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  try {
    return TableSet::from_directory(dir);
  } catch (const std::exception& e) {
    throw InputError(std::string("POLYEXPM_TABLE_DIR: ") + e.what());
  }
}

int run_gen_params(int M, double theta, int bits, std::optional<int> eps_bits, const fs::path& out) {
  if (M != 16 && M != 36 && M != 64) throw InputError("--M must be 16, 36 or 64");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InputError("--theta must be positive");
  if (bits < 64) throw InputError("--bits must be at least 64");
  std::optional<double> eps;
  if (eps_bits) eps = std::ldexp(1.0, -*eps_bits);
  const XPParamTable table = generate_table(M, theta, bits, eps);
  emit_table(table, out);
  return 0;
}

int run_expm(const fs::path& in, const std::string& method, const std::optional<fs::path>& table_path,
             int oracle_bits, const fs::path& out) {
  DenseMatrix x;
  try {
    x = parse_matrix_market(in);
  } catch (const std::exception& e) {
    throw InputError(in.string() + ": " + e.what());
  }
  DenseMatrix result;
  if (method == "poly") {
    ExpmOptions options;
    std::optional<TableSet> tables;
    if (table_path) {
      try {
        options.single_table = load_table(*table_path);
      } catch (const std::exception& e) {
        throw InputError(table_path->string() + ": " + e.what());
      }
    } else if ((tables = env_tables())) {
      options.tables = &*tables;
    }
    EvalReport rep = expm(x, options);
    if (rep.overflow) std::cerr << "warning: result overflowed\n";
    result = std::move(rep.result);
  } else if (method == "oracle") {
    result = oracle_expm(x, oracle_bits);
  } else if (method == "pade" || method.rfind("pade:", 0) == 0) {
    int m = kDefaultPadeOrder;
    if (method != "pade") {
      try {
        std::size_t pos = 0;
        m = std::stoi(method.substr(5), &pos);
        if (pos != method.size() - 5) throw std::invalid_argument("trailing text");
        pade_coeffs(m);
      } catch (const std::exception&) {
        throw InputError("bad Pade order in '" + method + "'");
      }
    }
    PadeReport rep = pade_expm_scaled(x, m, kDefaultPadeTheta);
    if (rep.overflow) std::cerr << "warning: result overflowed\n";
    std::cerr << "pade denominator condition: " << rep.condition << '\n';
    result = std::move(rep.result);
  } else {
    throw InputError("unknown method '" + method + "'");
  }
  write_matrix_market(result, out);
  return 0;
}

int run_bench(const std::optional<fs::path>& dir, const std::optional<std::string>& suite, const fs::path& out,
              bool clamp, int jobs, int pade_order, bool use_m64) {
  std::vector<MatrixSource> sources;
  if (dir.has_value() == suite.has_value()) throw InputError("give exactly one of --dir and --suite");
  if (suite) {
    if (*suite != "builtin") throw InputError("unknown suite '" + *suite + "'");
    sources = builtin_suite();
  } else {
    try {
      sources = load_directory(*dir);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    if (sources.empty()) throw InputError("no .mtx files in " + dir->string());
  }
  if (jobs < 1) throw InputError("--jobs must be positive");
  try {
    pade_coeffs(pade_order);
  } catch (const std::exception&) {
    throw InputError("--pade-order out of range");
  }

  BenchOptions options;
  options.methods = {"poly", "pade:" + std::to_string(pade_order)};
  options.jobs = jobs;
  options.expm.use_m64 = use_m64;
  std::optional<TableSet> tables = env_tables();
  if (tables) options.expm.tables = &*tables;
  const auto records = run_benchmark(sources, options);
  try {
    emit_csv(records, out, clamp);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix exponential via the product-form polynomial E_M(x)"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-params", "Derive a parameter table");
  int gen_M = 0;
  double gen_theta = 0.0;
  int gen_bits = kDefaultGenerationBits;
  std::optional<int> gen_eps_bits;
  std::string gen_out;
  gen->add_option("--M", gen_M, "Polynomial degree (16, 36 or 64)")->required();
  gen->add_option("--theta", gen_theta, "Half-width of the approximation interval")->required();
  gen->add_option("--bits", gen_bits, "Working precision in bits")->capture_default_str();
  gen->add_option("--eps-bits", gen_eps_bits, "Target precision 2^-b recorded in the table");
  gen->add_option("--out", gen_out, "Output table file")->required();

  auto* ex = app.add_subcommand("expm", "Exponential of one Matrix Market matrix");
  std::string ex_in, ex_out, ex_method = "poly";
  std::optional<std::string> ex_table;
  int ex_oracle_bits = kDefaultOracleBits;
  ex->add_option("--in", ex_in, "Input matrix")->required();
  ex->add_option("--out", ex_out, "Output matrix")->required();
  ex->add_option("--method", ex_method, "poly, pade[:m] or oracle")->capture_default_str();
  ex->add_option("--table", ex_table, "Evaluate with this single table");
  ex->add_option("--oracle-bits", ex_oracle_bits, "Oracle precision")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Error benchmark against the oracle");
  std::optional<std::string> bench_dir, bench_suite;
  std::string bench_out;
  bool bench_clamp = false;
  bool bench_m64 = false;
  int bench_jobs = 1;
  int bench_pade = kDefaultPadeOrder;
  bench->add_option("--dir", bench_dir, "Directory of .mtx files");
  bench->add_option("--suite", bench_suite, "Built-in suite name (builtin)");
  bench->add_option("--out", bench_out, "Output CSV")->required();
  bench->add_flag("--clamp-plot-columns", bench_clamp, "Append clamped log10 error columns");
  bench->add_option("--jobs", bench_jobs, "Worker threads")->capture_default_str();
  bench->add_option("--pade-order", bench_pade, "Pade baseline order")->capture_default_str();
  bench->add_flag("--m64", bench_m64, "Use the M = 64 table for the product form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*gen) return run_gen_params(gen_M, gen_theta, gen_bits, gen_eps_bits, gen_out);
    if (*ex) {
      std::optional<fs::path> table;
      if (ex_table) table = *ex_table;
      return run_expm(ex_in, ex_method, table, ex_oracle_bits, ex_out);
    }
    std::optional<fs::path> dir;
    if (bench_dir) dir = *bench_dir;
    return run_bench(dir, bench_suite, bench_out, bench_clamp, bench_jobs, bench_pade, bench_m64);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
