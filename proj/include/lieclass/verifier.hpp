#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieclass/detsys.hpp"
#include "lieclass/eval.hpp"
#include "lieclass/expr.hpp"

namespace lieclass {

// Second prolongation in the jet variables y1 = y', y2 = y''.
struct ProlongedField {
  Expr xi, phi, phi1, phi2;
};

// D_x = d/dx + y1 d/dy + y2 d/dy1.
Expr total_derivative(const Expr& e);

ProlongedField prolong2(const VectorField& v);

// pr2(v) applied to y2 - A*y1 - F, restricted to y2 = A*y1 + F. Identically
// zero exactly when v is a symmetry; a polynomial of degree 3 in y1.
Expr symmetry_residual(const VectorField& v, const Expr& A, const Expr& F);

// The four determining residuals read off the powers of y1 in a symmetry
// residual, in the order of build_determining_system:
// {-[y1^3], [y1^1], [y1^0], [y1^2]}.
std::array<Expr, 4> determining_from_residual(const Expr& residual);

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolutionCurve {
  std::vector<double> x, y, y1;
  double h = 0.0;
  double x0 = 0.0, y0 = 0.0, y1_0 = 0.0;  // initial condition
  bool truncated = false;
  std::string stop_reason;  // why a truncated curve ended early
};

constexpr double kBlowUp = 1e6;

// Classical RK4 for y'' = A(x) y' + F(y). Stops at a domain error or when
// |y| exceeds kBlowUp; throws IntegrationError if fewer than 10 samples remain.
SolutionCurve integrate_ode(const Expr& A, const Expr& F, double x0, double y0, double y1_0, double h, int steps,
                            const Bindings& params = {});

struct FlowCheck {
  bool conclusive = true;
  double defect = 0.0;  // max |y'' - A y' - F| over interior transported points
  int points = 0;
  std::string note;
};

constexpr double kFlowEpsilon = 1e-2;
constexpr int kFlowSubsteps = 10;
constexpr double kFlowThreshold = 1e-4;

// Moves every curve point along the flow of v for parameter time eps, refits
// the transported points as a graph with 5-point finite differences and
// measures how far they are from solving the equation.
FlowCheck flow_transport_check(const VectorField& v, const Expr& A, const Expr& F, double eps,
                               const SolutionCurve& curve, const Bindings& params = {});

// Finite-difference weights for derivatives 0..m at z on the nodes (Fornberg).
std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& nodes, int m);

}  // namespace lieclass
