#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieclass/eval.hpp"
#include "lieclass/expr.hpp"

namespace lieclass {

// xi(x,y) d/dx + phi(x,y) d/dy
struct VectorField {
  Expr xi;
  Expr phi;

  [[nodiscard]] std::string str() const;
};

// Residuals of the four determining equations, in this order:
//   xi_yy
//   -xi A' - A xi_x - 3 F xi_y - xi_xx + 2 phi_xy
//   -phi F' - 2 F xi_x - A phi_x + F phi_y + phi_xx
//   -2 A xi_y - 2 xi_xy + phi_yy
struct DeterminingSystem {
  std::array<Expr, 4> residuals;
};

DeterminingSystem build_determining_system(const Expr& A, const Expr& F, const VectorField& v);

// xi = alpha(x) y + beta(x),  phi = y^2 (A alpha + alpha') + y sigma(x) + tau(x),
// with alpha, beta, sigma, tau opaque functions of x.
VectorField reduced_ansatz(const Expr& A);

// The two equations left after substituting the ansatz, still in terms of the
// opaque alpha, beta, sigma, tau.
std::array<Expr, 2> reduced_residuals(const Expr& A, const Expr& F);

// Opaque A(x) and its k-th derivative.
Expr opaque_A(int order = 0);
Expr opaque(const std::string& name, int order = 0);

struct ConditionContext {
  std::optional<Expr> theta;
  std::optional<Expr> lambda;
  std::optional<Expr> n;
};

struct ConditionExpr {
  std::string name;
  Expr expr;  // in the opaque A(x) (and alpha(x) for E7, E8)
};

// name is one of E1..E8.
ConditionExpr condition(const std::string& name, const ConditionContext& context);

// Replaces the opaque A by a concrete expression in x.
Expr instantiate(const Expr& e, const Expr& A);

class DegenerateDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 0xC1A551F1ULL;

// The seed used when none is given: LIECLASS_SEED if set, else kDefaultSeed.
std::uint64_t default_seed();

struct SampleGrid {
  double x_lo = -2.0, x_hi = 2.0;
  double y_lo = 0.2, y_hi = 3.0;
  int nx = 50, ny = 50;
  std::uint64_t seed = kDefaultSeed;
  double pole_guard = 1e-3;

  static SampleGrid standard() {
    SampleGrid g;
    g.seed = default_seed();
    return g;
  }
};

struct ResidualStats {
  double max_abs = 0.0;
  int points = 0;
  int rejected = 0;
};

// Max |e| over the tensor grid (only the x samples when nothing depends on y).
// Points where any expression cannot be evaluated are redrawn; throws
// DegenerateDomainError if no point survives.
ResidualStats residual_stats(const std::vector<Expr>& exprs, const SampleGrid& grid, const Bindings& params = {});
double residual_max(const std::vector<Expr>& exprs, const SampleGrid& grid, const Bindings& params = {});

enum class Verdict { Holds, Violated, Indeterminate };

const char* to_string(Verdict v);

constexpr double kHoldsBelow = 1e-6;
constexpr double kViolatedAbove = 1e-3;

Verdict verdict_of(double residual);

// Samples the expressions (functions of x, possibly with antiderivative nodes)
// at the x points of the grid; rows where any fails are dropped.
std::vector<std::vector<double>> sample_columns(const std::vector<Expr>& columns, const SampleGrid& grid,
                                                const Bindings& params = {});

struct RankReport {
  int rank = 0;
  Verdict deficient = Verdict::Indeterminate;  // Holds: rank < columns
  std::vector<double> singular_values;         // of the max-normalized columns, descending
  std::vector<double> null_vector;             // for the smallest singular value, in column units
};

// Numerical rank of the columns on the grid with three-way certainty.
RankReport column_rank(const std::vector<Expr>& columns, const SampleGrid& grid, const Bindings& params = {});

// Verdict for "G + d*H = 0 on the grid for some constant d".
struct AffineConditionReport {
  Verdict verdict = Verdict::Indeterminate;
  double residual = 0.0;
  double d = 0.0;
};

AffineConditionReport affine_condition(const Expr& G, const Expr& H, const SampleGrid& grid, const Bindings& params = {});

// Verdict for "e = 0 on the grid" with the residual scaled by max(1, max|e_i|
// over its additive terms).
struct ConditionVerdict {
  Verdict verdict = Verdict::Indeterminate;
  double residual = 0.0;
};

ConditionVerdict zero_condition(const Expr& e, const SampleGrid& grid, const Bindings& params = {});

}  // namespace lieclass
