#include "lieclass/verifier.hpp"

#include <cmath>

namespace lieclass {

namespace {

const Expr Y1 = Expr::variable("y1");
const Expr Y2 = Expr::variable("y2");

}  // namespace

Expr total_derivative(const Expr& e) {
  return differentiate(e, "x") + Y1 * differentiate(e, "y") + Y2 * differentiate(e, "y1");
}

ProlongedField prolong2(const VectorField& v) {
  ProlongedField p;
  p.xi = v.xi;
  p.phi = v.phi;
  Expr dxi = total_derivative(v.xi);
  p.phi1 = expand(total_derivative(v.phi) - Y1 * dxi);
  p.phi2 = expand(total_derivative(p.phi1) - Y2 * dxi);
  return p;
}

Expr symmetry_residual(const VectorField& v, const Expr& A, const Expr& F) {
  ProlongedField p = prolong2(v);
  // Delta = y2 - A y1 - F
  Expr action = add({-p.xi * differentiate(A, "x") * Y1, -p.phi * differentiate(F, "y"), -A * p.phi1, p.phi2});
  return expand(substitute(action, "y2", A * Y1 + F));
}

std::array<Expr, 4> determining_from_residual(const Expr& residual) {
  auto c = polynomial_coefficients(residual, "y1", 3);
  return {expand(-c[3]), expand(c[1]), expand(c[0]), expand(c[2])};
}

SolutionCurve integrate_ode(const Expr& A, const Expr& F, double x0, double y0, double y1_0, double h, int steps,
                            const Bindings& params) {
  if (!(h > 0)) throw std::invalid_argument("step size must be positive");
  SolutionCurve c;
  c.h = h;
  c.x0 = x0;
  c.y0 = y0;
  c.y1_0 = y1_0;
  Bindings bx = params;
  Bindings by = params;
  EvalContext ctx_a;
  EvalContext ctx_f;
  auto rhs = [&](double x, double y, double p) {
    bx["x"] = x;
    by["y"] = y;
    return evaluate(A, bx, {}, &ctx_a) * p + evaluate(F, by, {}, &ctx_f);
  };
  c.x.push_back(x0);
  c.y.push_back(y0);
  c.y1.push_back(y1_0);
  double y = y0;
  double p = y1_0;
  for (int i = 0; i < steps; ++i) {
    const double x = x0 + i * h;
    try {
      double k1y = p;
      double k1p = rhs(x, y, p);
      double k2y = p + 0.5 * h * k1p;
      double k2p = rhs(x + 0.5 * h, y + 0.5 * h * k1y, k2y);
      double k3y = p + 0.5 * h * k2p;
      double k3p = rhs(x + 0.5 * h, y + 0.5 * h * k2y, k3y);
      double k4y = p + h * k3p;
      double k4p = rhs(x + h, y + h * k3y, k4y);
      double ny = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      double np = p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
      if (!std::isfinite(ny) || !std::isfinite(np) || std::abs(ny) > kBlowUp) {
        c.truncated = true;
        c.stop_reason = "blow-up guard at x = " + std::to_string(x + h);
        break;
      }
      y = ny;
      p = np;
    } catch (const DomainError& e) {
      c.truncated = true;
      c.stop_reason = std::string(e.what()) + " near x = " + std::to_string(x);
      break;
    }
    c.x.push_back(x0 + (i + 1) * h);
    c.y.push_back(y);
    c.y1.push_back(p);
  }
  if (c.x.size() < 10) {
    throw IntegrationError("solution curve too short (" + std::to_string(c.x.size()) + " points): " + c.stop_reason);
  }
  return c;
}

std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(m + 1), std::vector<double>(nodes.size(), 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

FlowCheck flow_transport_check(const VectorField& v, const Expr& A, const Expr& F, double eps,
                               const SolutionCurve& curve, const Bindings& params) {
  FlowCheck out;
  const std::size_t n = curve.x.size();
  std::vector<double> X(n);
  std::vector<double> Y(n);
  Bindings b = params;
  EvalContext ctx;
  auto field = [&](double x, double y, double& dx, double& dy) {
    b["x"] = x;
    b["y"] = y;
    dx = evaluate(v.xi, b, {}, &ctx);
    dy = evaluate(v.phi, b, {}, &ctx);
  };
  const double de = eps / kFlowSubsteps;
  try {
    for (std::size_t i = 0; i < n; ++i) {
      double x = curve.x[i];
      double y = curve.y[i];
      for (int s = 0; s < kFlowSubsteps; ++s) {
        double ax, ay, bx, by, cx, cy, dx, dy;
        field(x, y, ax, ay);
        field(x + 0.5 * de * ax, y + 0.5 * de * ay, bx, by);
        field(x + 0.5 * de * bx, y + 0.5 * de * by, cx, cy);
        field(x + de * cx, y + de * cy, dx, dy);
        x += de / 6 * (ax + 2 * bx + 2 * cx + dx);
        y += de / 6 * (ay + 2 * by + 2 * cy + dy);
      }
      X[i] = x;
      Y[i] = y;
    }
  } catch (const DomainError& e) {
    out.conclusive = false;
    out.note = std::string("flow left the domain: ") + e.what();
    return out;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(X[i] > X[i - 1])) {
      out.conclusive = false;
      out.note = "transported curve is not a graph over x";
      return out;
    }
  }
  Bindings bx = params;
  Bindings by = params;
  EvalContext ctx_a;
  EvalContext ctx_f;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    std::vector<double> nodes(X.begin() + static_cast<long>(i) - 2, X.begin() + static_cast<long>(i) + 3);
    auto w = fd_weights(X[i], nodes, 2);
    double d1 = 0;
    double d2 = 0;
    for (std::size_t j = 0; j < 5; ++j) {
      d1 += w[1][j] * Y[i - 2 + j];
      d2 += w[2][j] * Y[i - 2 + j];
    }
    bx["x"] = X[i];
    by["y"] = Y[i];
    try {
      double defect = std::abs(d2 - evaluate(A, bx, {}, &ctx_a) * d1 - evaluate(F, by, {}, &ctx_f));
      out.defect = std::max(out.defect, defect);
      ++out.points;
    } catch (const DomainError&) {
    }
  }
  if (out.points == 0) {
    out.conclusive = false;
    out.note = "no interior point could be evaluated";
  }
  return out;
}

}  // namespace lieclass
