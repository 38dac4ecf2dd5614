#include "lieclass/detsys.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace lieclass {

std::string VectorField::str() const {
  auto part = [](const Expr& c, const char* d) -> std::string {
    if (c.is_zero()) return "";
    if (c.is_one()) return d;
    std::string s = c.str();
    if (c.kind() == Kind::Add) s = "(" + s + ")";
    return s + "*" + d;
  };
  std::string a = part(xi, "dx");
  std::string b = part(phi, "dy");
  if (a.empty() && b.empty()) return "0";
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (b[0] == '-') return a + " - " + b.substr(1);
  return a + " + " + b;
}

DeterminingSystem build_determining_system(const Expr& A, const Expr& F, const VectorField& v) {
  const Expr& xi = v.xi;
  const Expr& phi = v.phi;
  auto d = [](const Expr& e, const char* var, int k = 1) { return differentiate(e, var, k); };
  Expr Ap = d(A, "x");
  Expr Fp = d(F, "y");
  DeterminingSystem s;
  s.residuals[0] = d(xi, "y", 2);
  s.residuals[1] = add({-xi * Ap, -A * d(xi, "x"), Expr(-3) * F * d(xi, "y"), -d(xi, "x", 2),
                        Expr(2) * d(d(phi, "x"), "y")});
  s.residuals[2] = add({-phi * Fp, Expr(-2) * F * d(xi, "x"), -A * d(phi, "x"), F * d(phi, "y"), d(phi, "x", 2)});
  s.residuals[3] = add({Expr(-2) * A * d(xi, "y"), Expr(-2) * d(d(xi, "x"), "y"), d(phi, "y", 2)});
  // expanded so that like powers cancel exactly instead of in floating point
  for (auto& r : s.residuals) r = expand(r);
  return s;
}

Expr opaque(const std::string& name, int order) { return Expr::function(name, "x", order); }
Expr opaque_A(int order) { return opaque("A", order); }

VectorField reduced_ansatz(const Expr& A) {
  const Expr y = Expr::variable("y");
  Expr alpha = opaque("alpha");
  VectorField v;
  v.xi = alpha * y + opaque("beta");
  v.phi = pow(y, Expr(2)) * (A * alpha + differentiate(alpha, "x")) + y * opaque("sigma") + opaque("tau");
  return v;
}

std::array<Expr, 2> reduced_residuals(const Expr& A, const Expr& F) {
  const Expr y = Expr::variable("y");
  const Expr y2 = pow(y, Expr(2));
  auto al = [](int k) { return opaque("alpha", k); };
  auto be = [](int k) { return opaque("beta", k); };
  auto si = [](int k) { return opaque("sigma", k); };
  auto ta = [](int k) { return opaque("tau", k); };
  Expr A1 = differentiate(A, "x");
  Expr A2 = differentiate(A, "x", 2);
  Expr Fp = differentiate(F, "y");

  Expr first = add({Expr(-3) * F * al(0), Expr(3) * y * (al(0) * A1 + A * al(1) + al(2)), -be(0) * A1, -A * be(1),
                    Expr(2) * si(1), -be(2)});
  Expr second = add({Fp * (-y * si(0) - ta(0) + y2 * (-A * al(0) - al(1))),
                     F * (Expr(2) * A * y * al(0) + si(0) - Expr(2) * be(1)), -A * ta(1), ta(2),
                     y * (-A * si(1) + si(2)),
                     y2 * add({-A * al(0) * A1, -pow(A, Expr(2)) * al(1), Expr(2) * A1 * al(1), al(0) * A2, al(3)})});
  return {first, second};
}

ConditionExpr condition(const std::string& name, const ConditionContext& ctx) {
  auto need = [&](const std::optional<Expr>& v, const char* what) -> Expr {
    if (!v) throw std::invalid_argument(name + " needs " + what);
    return *v;
  };
  auto A = [](int k) { return opaque_A(k); };
  auto P = [](const Expr& e, int k) { return pow(e, Expr(k)); };
  const Expr a = A(0);
  ConditionExpr out;
  out.name = name;
  if (name == "E1") {
    Expr th = need(ctx.theta, "theta");
    out.expr = add({Expr(36) * P(a, 5), Expr(-900) * P(a, 3) * A(1), Expr(2000) * P(a, 2) * A(2),
                    Expr(625) * a * (Expr(4) * (P(A(1), 2) + th) - Expr(3) * A(3)),
                    Expr(625) * (Expr(-5) * A(1) * A(2) + A(4))});
  } else if (name == "E2") {
    Expr th = need(ctx.theta, "theta");
    out.expr = add({Expr(9) * P(a, 4), Expr(-180) * P(a, 2) * A(1), Expr(275) * a * A(2),
                    Expr(25) * (Expr(7) * P(A(1), 2) + Expr(25) * th - Expr(5) * A(3))});
  } else if (name == "E3") {
    Expr th = need(ctx.theta, "theta");
    out.expr = Expr(2) * P(a, 3) + a * (th - Expr(4) * A(1)) + A(2);
  } else if (name == "E4") {
    Expr th = need(ctx.theta, "theta");
    out.expr = th + Expr(2) * P(a, 2) - Expr(2) * A(1);
  } else if (name == "E5") {
    Expr n = need(ctx.n, "n");
    Expr lam = need(ctx.lambda, "lambda");
    out.expr = add({Expr(2) * P(a, 3) * (P(n, 2) - Expr(1)),
                    a * (Expr(3) + n) * ((n - Expr(1)) * (Expr(3) + n) * lam - Expr(4) * n * A(1)),
                    P(Expr(3) + n, 2) * A(2)});
  } else if (name == "E6") {
    Expr n = need(ctx.n, "n");
    Expr lam = need(ctx.lambda, "lambda");
    out.expr = Expr(-2) * P(a, 2) * (Expr(1) + n) + (Expr(3) + n) * (-(Expr(3) + n) * lam + Expr(2) * A(1));
  } else if (name == "E7") {
    Expr lam = need(ctx.lambda, "lambda");
    auto al = [](int k) { return opaque("alpha", k); };
    out.expr = add({lam * a * al(0), -lam * al(1), -P(a, 2) * al(1), -a * al(0) * A(1), al(0) * A(2),
                    Expr(2) * A(1) * al(1), al(3)});
  } else if (name == "E8") {
    Expr lam = need(ctx.lambda, "lambda");
    auto al = [](int k) { return opaque("alpha", k); };
    out.expr = al(0) * (A(1) - lam) + a * al(1) + al(2);
  } else {
    throw std::invalid_argument("unknown condition " + name);
  }
  return out;
}

Expr instantiate(const Expr& e, const Expr& A) { return substitute_function(e, "A", A); }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LIECLASS_SEED")) {
    try {
      return std::stoull(env, nullptr, 10);
    } catch (const std::exception&) {
    }
  }
  return kDefaultSeed;
}

namespace {

bool any_depends_on_y(const std::vector<Expr>& exprs) {
  return std::any_of(exprs.begin(), exprs.end(), [](const Expr& e) { return depends_on(e, "y"); });
}

// Evaluates all expressions at one point; false if the point is outside the domain.
bool eval_point(const std::vector<Expr>& exprs, Bindings& b, const EvalOptions& opt, EvalContext& ctx,
                std::vector<double>& out) {
  out.clear();
  try {
    for (const auto& e : exprs) out.push_back(evaluate(e, b, opt, &ctx));
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

// Walks the tensor grid (or the x samples only), redrawing points outside the domain.
template <typename Visit>
int walk_grid(const std::vector<Expr>& exprs, const SampleGrid& grid, const Bindings& params, bool use_y, Visit&& visit) {
  std::mt19937_64 rng(grid.seed);
  std::uniform_real_distribution<double> ux(grid.x_lo, grid.x_hi);
  std::uniform_real_distribution<double> uy(grid.y_lo, grid.y_hi);
  std::vector<double> xs(static_cast<std::size_t>(grid.nx));
  std::vector<double> ys(static_cast<std::size_t>(use_y ? grid.ny : 1));
  for (auto& v : xs) v = ux(rng);
  for (auto& v : ys) v = uy(rng);
  std::mt19937_64 redraw(grid.seed ^ 0x9E3779B97F4A7C15ULL);

  EvalOptions opt;
  opt.pole_guard = grid.pole_guard;
  EvalContext ctx;
  Bindings b = params;
  std::vector<double> values;
  int rejected = 0;
  for (double x0 : xs) {
    for (double y0 : ys) {
      b["x"] = x0;
      b["y"] = y0;
      bool ok = eval_point(exprs, b, opt, ctx, values);
      for (int attempt = 0; !ok && attempt < 20; ++attempt) {
        b["x"] = ux(redraw);
        if (use_y) b["y"] = uy(redraw);
        ok = eval_point(exprs, b, opt, ctx, values);
      }
      if (!ok) {
        ++rejected;
        continue;
      }
      visit(b, values);
    }
  }
  return rejected;
}

}  // namespace

ResidualStats residual_stats(const std::vector<Expr>& exprs, const SampleGrid& grid, const Bindings& params) {
  ResidualStats stats;
  const bool use_y = any_depends_on_y(exprs);
  stats.rejected = walk_grid(exprs, grid, params, use_y, [&](const Bindings&, const std::vector<double>& v) {
    ++stats.points;
    for (double r : v) stats.max_abs = std::max(stats.max_abs, std::abs(r));
  });
  if (stats.points == 0) throw DegenerateDomainError("no sample point lies in the domain of the expressions");
  return stats;
}

double residual_max(const std::vector<Expr>& exprs, const SampleGrid& grid, const Bindings& params) {
  return residual_stats(exprs, grid, params).max_abs;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Verdict verdict_of(double residual) {
  if (!std::isfinite(residual)) return Verdict::Indeterminate;
  if (residual < kHoldsBelow) return Verdict::Holds;
  if (residual > kViolatedAbove) return Verdict::Violated;
  return Verdict::Indeterminate;
}

std::vector<std::vector<double>> sample_columns(const std::vector<Expr>& columns, const SampleGrid& grid,
                                                const Bindings& params) {
  std::vector<std::vector<double>> rows;
  walk_grid(columns, grid, params, false, [&](const Bindings&, const std::vector<double>& v) { rows.push_back(v); });
  if (rows.empty()) throw DegenerateDomainError("no sample point lies in the domain of the columns");
  return rows;
}

RankReport column_rank(const std::vector<Expr>& columns, const SampleGrid& grid, const Bindings& params) {
  auto rows = sample_columns(columns, grid, params);
  const auto n = static_cast<Eigen::Index>(columns.size());
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd M(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  std::vector<double> scale(static_cast<std::size_t>(n), 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = M.col(j).cwiseAbs().maxCoeff();
    if (s < 1e-12) {
      M.col(j).setZero();
    } else {
      M.col(j) /= s;
      scale[static_cast<std::size_t>(j)] = s;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  RankReport out;
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv(i));
  while (static_cast<Eigen::Index>(out.singular_values.size()) < n) out.singular_values.push_back(0.0);
  const double top = out.singular_values.front();
  if (top > 0) {
    bool unclear = false;
    for (double s : out.singular_values) {
      double rho = s / top;
      if (rho >= kViolatedAbove) {
        ++out.rank;
      } else if (rho >= kHoldsBelow) {
        unclear = true;
      }
    }
    if (unclear) {
      out.deficient = Verdict::Indeterminate;
    } else {
      out.deficient = out.rank < n ? Verdict::Holds : Verdict::Violated;
    }
  } else {
    out.deficient = Verdict::Holds;
  }
  const Eigen::MatrixXd& V = svd.matrixV();
  for (Eigen::Index j = 0; j < n; ++j) out.null_vector.push_back(V(j, n - 1) / scale[static_cast<std::size_t>(j)]);
  return out;
}

AffineConditionReport affine_condition(const Expr& G, const Expr& H, const SampleGrid& grid, const Bindings& params) {
  auto rows = sample_columns({G, H}, grid, params);
  double gh = 0;
  double hh = 0;
  for (const auto& r : rows) {
    gh += r[0] * r[1];
    hh += r[1] * r[1];
  }
  AffineConditionReport out;
  out.d = hh > 1e-300 ? -gh / hh : 0.0;
  double worst = 0;
  double scale = 1;
  for (const auto& r : rows) {
    worst = std::max(worst, std::abs(r[0] + out.d * r[1]));
    scale = std::max({scale, std::abs(r[0]), std::abs(out.d * r[1])});
  }
  out.residual = worst / scale;
  out.verdict = verdict_of(out.residual);
  return out;
}

ConditionVerdict zero_condition(const Expr& e, const SampleGrid& grid, const Bindings& params) {
  std::vector<Expr> terms;
  if (e.kind() == Kind::Add) {
    terms.assign(e.args().begin(), e.args().end());
  } else {
    terms.push_back(e);
  }
  double worst = 0;
  double scale = 1;
  const bool use_y = any_depends_on_y(terms);
  int points = 0;
  walk_grid(terms, grid, params, use_y, [&](const Bindings&, const std::vector<double>& v) {
    ++points;
    double sum = 0;
    for (double t : v) {
      sum += t;
      scale = std::max(scale, std::abs(t));
    }
    worst = std::max(worst, std::abs(sum));
  });
  if (points == 0) throw DegenerateDomainError("no sample point lies in the domain of the condition");
  ConditionVerdict out;
  out.residual = worst / scale;
  out.verdict = verdict_of(out.residual);
  return out;
}

}  // namespace lieclass
