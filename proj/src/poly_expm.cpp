#include "polyexpm/poly_expm.hpp"

#include <cmath>
#include <string>

namespace polyexpm {

namespace {

void check_table(const ParamTable& t) {
  if (t.m < 1 || t.m_prime < 1 || static_cast<int>(t.c.size()) != t.m_prime || t.M != t.m * t.m_prime)
    throw std::invalid_argument("eval_product: malformed parameter table");
  for (const auto& row : t.c)
    if (static_cast<int>(row.size()) != t.m + 1) throw std::invalid_argument("eval_product: malformed factor row");
}

const ParamTable& table_for(const TableSet& set, PlanOrder order) {
  switch (order) {
    case PlanOrder::M16:
      return set.m16;
    case PlanOrder::M36:
      return set.m36;
    case PlanOrder::M64:
      return set.m64;
  }
  throw std::invalid_argument("unknown plan order");
}

}  // namespace

DenseMatrix eval_product(const DenseMatrix& x, const ParamTable& table, MulCounter& counter) {
  check_table(table);
  const std::size_t n = x.n();
  const int m = table.m;

  std::vector<DenseMatrix> powers;
  powers.reserve(m);
  powers.push_back(x);
  for (int j = 2; j <= m; ++j) powers.push_back(mat_mul(powers.back(), x, counter));

  std::vector<double> coeffs(m);
  DenseMatrix result;
  for (int i = 0; i < table.m_prime; ++i) {
    const auto& row = table.c[i];
    // alpha rides on the first factor's coefficients.
    const double scale = i == 0 ? table.alpha : 1.0;
    for (int j = 1; j <= m; ++j) coeffs[j - 1] = scale * row[j];
    DenseMatrix factor = lincomb(coeffs, std::span<const DenseMatrix>(powers), scale * row[0], n);
    result = i == 0 ? std::move(factor) : mat_mul(result, factor, counter);
  }
  return result;
}

double eval_product_scalar(double x, const ParamTable& table) {
  check_table(table);
  std::vector<double> powers(table.m + 1, 1.0);
  for (int j = 1; j <= table.m; ++j) powers[j] = powers[j - 1] * x;
  double result = 1.0;
  for (int i = 0; i < table.m_prime; ++i) {
    const double scale = i == 0 ? table.alpha : 1.0;
    double f = 0.0;
    for (int j = 1; j <= table.m; ++j) f += scale * table.c[i][j] * powers[j];
    f += scale * table.c[i][0];
    result = i == 0 ? f : result * f;
  }
  return result;
}

const TableSet& TableSet::shipped() {
  static const TableSet set{shipped_table(TableId::M16), shipped_table(TableId::M36), shipped_table(TableId::M64)};
  return set;
}

TableSet TableSet::from_directory(const std::filesystem::path& dir) {
  return {load_table(dir / table_file_name(TableId::M16)), load_table(dir / table_file_name(TableId::M36)),
          load_table(dir / table_file_name(TableId::M64))};
}

Plan select_plan(double norm) {
  if (norm < 0.0 || std::isnan(norm)) throw std::invalid_argument("select_plan: norm must be nonnegative");
  if (norm <= 1.5) return {PlanOrder::M16, 0};
  if (norm <= 9.75) return {PlanOrder::M36, 0};
  return {PlanOrder::M36, scaling_exponent(norm, 9.75)};
}

Plan select_plan_m64(double norm) {
  if (norm < 0.0 || std::isnan(norm)) throw std::invalid_argument("select_plan_m64: norm must be nonnegative");
  return {PlanOrder::M64, scaling_exponent(norm, 20.25)};
}

EvalReport expm(const DenseMatrix& x, const ExpmOptions& options) {
  if (x.empty()) throw DimensionError("expm: empty matrix");
  const TableSet& tables = options.tables ? *options.tables : TableSet::shipped();
  const double norm = one_norm(x);
  EvalReport rep;
  if (!std::isfinite(norm)) {
    rep.result = DenseMatrix(x.n());
    for (double& v : rep.result.data()) v = NAN;
    rep.overflow = true;
    return rep;
  }

  const ParamTable* table = nullptr;
  if (options.single_table) {
    table = &*options.single_table;
    rep.scaling_k = scaling_exponent(norm, table->theta);
  } else {
    const Plan plan = options.use_m64 ? select_plan_m64(norm) : select_plan(norm);
    table = &table_for(tables, plan.order);
    rep.scaling_k = plan.scaling_k;
  }
  rep.order_used = table->M;

  MulCounter counter;
  rep.result = eval_product(ldexp(x, -rep.scaling_k), *table, counter);
  rep.overflow = !rep.result.all_finite();
  for (int s = 0; s < rep.scaling_k && !rep.overflow; ++s) {
    rep.result = mat_mul(rep.result, rep.result, counter);
    rep.overflow = !rep.result.all_finite();
  }
  rep.mm_count = counter.count;
  return rep;
}

}  // namespace polyexpm
