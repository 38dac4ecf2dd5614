#include "lieclass/table.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "lieclass/parse.hpp"

namespace lieclass {

const std::vector<TableRow>& table_rows() {
  static const std::vector<TableRow> rows = {
      {"mu*e^y", "mu*exp(y)", "0", 2,
       {{"0", "exp(y)", {{"1", "0"}, {"x", "-2"}}}, {"0", "3*exp(y)", {{"1", "0"}, {"x", "-2"}}}}},
      {"mu*e^y", "mu*exp(y)", "-1/x", 2, {{"-1/x", "exp(y)", {}}, {"-1/x", "-2*exp(y)", {}}}},
      {"mu*e^y", "mu*exp(y)", "M/x, M != -1", 1,
       {{"3/x", "exp(y)", {{"x", "-2"}}}, {"-2/x", "5*exp(y)", {{"x", "-2"}}}}},
      {"mu*e^y+theta", "mu*exp(y) + theta", "sqrt(theta/2)*tan(sqrt(theta/2)*(x+2m))", 2,
       {{"tan(x)", "exp(y) + 2", {}}, {"1/2*tan(1/2*(x + 1/2))", "3*exp(y) + 1/2", {}}}},
      {"y^2", "y^2", "p/(x+m), p in {0, -15, -10/3, -5/3}", 2,
       {{"0", "y^2", {}},
        {"-15/(x + 1/2)", "y^2", {}},
        {"-10/(3*x)", "y^2", {}},
        {"-5/(3*(x - 1/3))", "y^2", {}}}},
      {"y^2+theta", "y^2 + theta, theta = -9a^4 < 0", "5a*tan(a*x+m) (real form)", 1,
       {{"5/2*tan(x/2)", "y^2 - 9/16", {}}, {"5*tan(x + 1/3)", "y^2 - 9", {}}}},
      {"y^-1", "y^(-1)", "M, M != 0", 2, {{"2", "y^(-1)", {}}, {"-1", "y^(-1)", {}}}},
      {"y^-1", "y^(-1)", "M/x, M != 0", 1,
       {{"2/x", "y^(-1)", {{"x", "y"}}}, {"-3/x", "y^(-1)", {{"x", "y"}}}}},
      {"y^-3", "y^(-3)", "0", 3, {{"0", "y^(-3)", {}}, {"0", "2*y^(-3)", {}}}},
      {"y^-3", "y^(-3)", "M/x, M != 0", 1,
       {{"3/x", "y^(-3)", {{"2*x", "y"}}}, {"-2/x", "y^(-3)", {{"2*x", "y"}}}}},
      {"y^n", "y^n", "-((n+3)/(n+1))/x, n != -1", 2, {{"-(3/2)/x", "y^3", {}}, {"-(4/3)/x", "y^5", {}}}},
      {"y^n", "y^n", "0", 2,
       {{"0", "y^3", {{"1", "0"}, {"x", "-y"}}}, {"0", "y^5", {{"1", "0"}, {"x", "-y/2"}}}}},
      {"y^n", "y^n", "M/x, M != 0, -(n+3)/(n+1)", 1,
       {{"2/x", "y^3", {{"2*x", "-2*y"}}}, {"-1/x", "y^5", {{"4*x", "-2*y"}}}}},
      {"y^-1+lambda*y", "y^(-1) + lambda*y", "lambda*x + m", 2,
       {{"x", "y^(-1) + y", {}}, {"2*x + 1", "y^(-1) + 2*y", {}}}},
      {"y^-3+lambda*y", "y^(-3) + lambda*y", "0", 3, {{"0", "y^(-3) + y", {}}, {"0", "y^(-3) + 4*y", {}}}},
      {"y^n+lambda*y", "y^n + lambda*y", "tan family", 2,
       {{"3/sqrt(2)*tan(sqrt(2)*x)", "y^3 + y", {}}, {"4*sqrt(2/3)*tan(sqrt(6)*x)", "y^5 + 2*y", {}}}},
      {"mu*y*ln(y)", "mu*y*ln(y)", "M", 1,
       {{"3", "y*ln(y)", {{"1", "0"}}}, {"-1", "2*y*ln(y)", {{"1", "0"}}}}},
      {"F(y)", "F(y) generic", "M", 1, {{"2", "ln(y) + y", {{"1", "0"}}}, {"-1", "ln(y) + y", {{"1", "0"}}}}},
      {"linear", "lambda*y + theta", "any", 8, {{"0", "0", {}}, {"2", "3*y", {}}, {"x^2", "3", {}}}},
  };
  return rows;
}

bool spans_contain(const std::vector<VectorField>& ours, const std::vector<VectorField>& table, const Bindings& samples) {
  if (table.empty()) return true;
  if (ours.empty()) return false;
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> ux(-1.5, 1.5);
  std::uniform_real_distribution<double> uy(0.3, 2.5);
  std::vector<std::vector<double>> ours_rows;
  std::vector<std::vector<double>> table_rows_;
  EvalOptions eo;
  eo.pole_guard = 1e-2;
  for (int attempt = 0; attempt < 400 && ours_rows.size() < 60; ++attempt) {
    Bindings b = samples;
    b["x"] = ux(rng);
    b["y"] = uy(rng);
    std::vector<double> o;
    std::vector<double> t;
    try {
      for (const auto* set : {&ours, &table}) {
        auto& dst = set == &ours ? o : t;
        dst.resize(2 * set->size());
        for (std::size_t j = 0; j < set->size(); ++j) {
          dst[2 * j] = evaluate((*set)[j].xi, b, eo);
          dst[2 * j + 1] = evaluate((*set)[j].phi, b, eo);
        }
      }
    } catch (const std::exception&) {
      continue;
    }
    ours_rows.push_back(std::move(o));
    table_rows_.push_back(std::move(t));
  }
  if (ours_rows.size() < 10) return false;
  const auto m = static_cast<Eigen::Index>(2 * ours_rows.size());
  const auto d = static_cast<Eigen::Index>(ours.size());
  Eigen::MatrixXd B(m, d);
  for (std::size_t i = 0; i < ours_rows.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      B(static_cast<Eigen::Index>(2 * i), j) = ours_rows[i][static_cast<std::size_t>(2 * j)];
      B(static_cast<Eigen::Index>(2 * i + 1), j) = ours_rows[i][static_cast<std::size_t>(2 * j + 1)];
    }
  }
  auto qr = B.colPivHouseholderQr();
  for (std::size_t k = 0; k < table.size(); ++k) {
    Eigen::VectorXd t(m);
    for (std::size_t i = 0; i < ours_rows.size(); ++i) {
      t(static_cast<Eigen::Index>(2 * i)) = table_rows_[i][2 * k];
      t(static_cast<Eigen::Index>(2 * i + 1)) = table_rows_[i][2 * k + 1];
    }
    Eigen::VectorXd c = qr.solve(t);
    double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
    if ((B * c - t).cwiseAbs().maxCoeff() / scale > 1e-8) return false;
  }
  return true;
}

TableCheck check_instance(const TableRow& row, const TableInstance& instance, const SampleGrid& grid) {
  TableCheck out;
  out.row = &row;
  out.instance = &instance;
  Expr A = parse(instance.A);
  Expr F = parse(instance.F);
  ClassifyOptions opt;
  opt.grid = grid;
  out.result = classify(A, F, opt);
  const auto& dim = out.result.dimension;
  out.dimension_ok = dim.kind == Dimension::Kind::Exact && dim.value == row.dim;
  Bindings samples = sample_values({A, F});
  for (const auto& g : out.result.generators) {
    auto sys = build_determining_system(A, F, g);
    double r;
    try {
      r = residual_max({sys.residuals.begin(), sys.residuals.end()}, grid, samples);
    } catch (const DegenerateDomainError&) {
      r = std::numeric_limits<double>::infinity();
    }
    out.residual = std::max(out.residual, r);
  }
  std::vector<VectorField> printed;
  for (const auto& [xi, phi] : instance.fields) printed.push_back({parse(xi), parse(phi)});
  out.span_ok = spans_contain(out.result.generators, printed, samples);
  const bool explicit_basis = row.dim != 8 || out.result.generators.size() == 8;
  const bool count_ok = !explicit_basis || static_cast<int>(out.result.generators.size()) == row.dim;
  out.pass = out.dimension_ok && out.residual < 1e-8 && out.span_ok && count_ok;
  std::ostringstream msg;
  msg << "dim " << dim.str() << " (table " << row.dim << ")";
  if (!out.result.generators.empty()) msg << ", generator residual " << out.residual;
  if (!instance.fields.empty()) msg << (out.span_ok ? ", table generator matched" : ", table generator NOT in span");
  if (!count_ok) msg << ", " << out.result.generators.size() << " generators";
  out.message = msg.str();
  return out;
}

}  // namespace lieclass
