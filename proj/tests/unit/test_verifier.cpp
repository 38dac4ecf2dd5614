#include "doctest.h"

#include <cmath>
#include <random>

#include "lieclass/parse.hpp"
#include "lieclass/verifier.hpp"

using namespace lieclass;

namespace {

VectorField field(const std::string& xi, const std::string& phi) { return {parse(xi), parse(phi)}; }

Expr random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars, int degree) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Expr out(0);
  if (vars.size() == 1) {
    Expr v = Expr::variable(vars[0]);
    for (int k = 0; k <= degree; ++k) out = out + Expr(coef(rng)) * pow(v, Expr(k));
    return out;
  }
  Expr a = Expr::variable(vars[0]);
  Expr b = Expr::variable(vars[1]);
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) out = out + Expr(coef(rng)) * pow(a, Expr(i)) * pow(b, Expr(j));
  }
  return out;
}

}  // namespace

TEST_CASE("prolongation examples") {
  auto t = prolong2(field("1", "0"));
  CHECK(t.phi1.is_zero());
  CHECK(t.phi2.is_zero());
  auto s = prolong2(field("x", "0"));
  CHECK(s.phi1 == parse("-y1"));
  CHECK(s.phi2 == parse("-2*y2"));
  auto u = prolong2(field("0", "y"));
  CHECK(u.phi1 == parse("y1"));
  CHECK(u.phi2 == parse("y2"));
}

TEST_CASE("prolongation recursion is self-consistent") {
  VectorField v = field("x^2*y + exp(x)", "y^3 - x*y");
  auto p = prolong2(v);
  Expr y2 = Expr::variable("y2");
  Expr direct = expand(total_derivative(p.phi1) - y2 * total_derivative(v.xi));
  CHECK(direct == p.phi2);
}

TEST_CASE("symmetry residual examples") {
  CHECK(symmetry_residual(field("1", "0"), parse("3"), parse("y^5 + exp(y)")).is_zero());
  CHECK(symmetry_residual(field("x", "-2"), parse("M/x"), parse("mu*exp(y)")).is_zero());
  CHECK(symmetry_residual(field("0", "1"), parse("0"), parse("y^2")) == parse("-2*y"));
}

TEST_CASE("y1 expansion of the symmetry residual reproduces the determining system") {
  std::mt19937_64 rng(20240517);
  SampleGrid grid;
  grid.nx = grid.ny = 12;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Expr A = random_poly(rng, {"x"}, 2);
    Expr F = random_poly(rng, {"y"}, 3);
    VectorField v{random_poly(rng, {"x", "y"}, 2), random_poly(rng, {"x", "y"}, 3)};
    auto from_prolongation = determining_from_residual(symmetry_residual(v, A, F));
    auto hard_coded = build_determining_system(A, F, v).residuals;
    std::vector<Expr> diffs;
    for (int k = 0; k < 4; ++k) diffs.push_back(from_prolongation[k] - hard_coded[k]);
    worst = std::max(worst, residual_max(diffs, grid));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("RK4 oracles") {
  SUBCASE("straight line") {
    auto c = integrate_ode(parse("0"), parse("0"), 0.5, 1, 2, 0.01, 100);
    double err = 0;
    for (std::size_t i = 0; i < c.x.size(); ++i) err = std::max(err, std::abs(c.y[i] - (1 + 2 * (c.x[i] - 0.5))));
    CHECK(err < 1e-12);
  }
  SUBCASE("sine over one period") {
    const double h = 1e-3;
    auto c = integrate_ode(parse("0"), parse("-y"), 0, 0, 1, h, static_cast<int>(std::ceil(2 * M_PI / h)));
    double err = 0;
    for (std::size_t i = 0; i < c.x.size(); ++i) err = std::max(err, std::abs(c.y[i] - std::sin(c.x[i])));
    CHECK(err < 1e-10);
  }
  SUBCASE("logarithm") {
    auto c = integrate_ode(parse("-1/x"), parse("0"), 1, 0, 1, 1e-3, 1000);
    double err = 0;
    for (std::size_t i = 0; i < c.x.size(); ++i) err = std::max(err, std::abs(c.y[i] - std::log(c.x[i])));
    CHECK(err < 1e-10);
  }
  SUBCASE("fourth order convergence") {
    auto max_err = [](double h, int steps) {
      auto c = integrate_ode(parse("0"), parse("-y"), 0, 0, 1, h, steps);
      double err = 0;
      for (std::size_t i = 0; i < c.x.size(); ++i) err = std::max(err, std::abs(c.y[i] - std::sin(c.x[i])));
      return err;
    };
    CHECK(max_err(0.2, 30) / max_err(0.1, 60) >= 14);
  }
}

TEST_CASE("integration stops cleanly") {
  SUBCASE("blow-up guard") {
    auto c = integrate_ode(parse("0"), parse("y^2"), 0, 1, 0, 1e-2, 1000);
    CHECK(c.truncated);
    CHECK(c.x.size() < 1001);
  }
  SUBCASE("domain error keeps the prefix") {
    auto c = integrate_ode(parse("0"), parse("ln(y)"), 0, 1, -1, 1e-2, 500);
    CHECK(c.truncated);
    CHECK(c.x.size() >= 10);
  }
  SUBCASE("too short a prefix fails") {
    CHECK_THROWS_AS(integrate_ode(parse("0"), parse("ln(y)"), 0, 0.01, -1, 1e-2, 500), IntegrationError);
  }
}

TEST_CASE("finite-difference weights") {
  std::vector<double> nodes = {0.0, 0.1, 0.25, 0.3, 0.5};
  auto w = fd_weights(0.25, nodes, 2);
  double d2 = 0;
  double d1 = 0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    d1 += w[1][j] * std::pow(nodes[j], 3);
    d2 += w[2][j] * std::pow(nodes[j], 3);
  }
  CHECK(d1 == doctest::Approx(3 * 0.25 * 0.25).epsilon(1e-10));
  CHECK(d2 == doctest::Approx(6 * 0.25).epsilon(1e-10));
}

TEST_CASE("flow transport") {
  SUBCASE("translation keeps the defect of the untransported curve") {
    Expr A = parse("2");
    Expr F = parse("y^3");
    auto c = integrate_ode(A, F, 0, 0.5, 0.1, 1e-3, 500);
    auto r = flow_transport_check(field("1", "0"), A, F, kFlowEpsilon, c);
    CHECK(r.conclusive);
    CHECK(r.defect < 1e-6);
  }
  SUBCASE("Ermakov scaling") {
    Expr A = parse("3/x");
    Expr F = parse("y^(-3)");
    auto c = integrate_ode(A, F, 1, 1, 0.3, 1e-3, 800);
    auto r = flow_transport_check(field("2*x", "y"), A, F, kFlowEpsilon, c);
    CHECK(r.conclusive);
    CHECK(r.defect < kFlowThreshold);
  }
  SUBCASE("a non-symmetry is detected") {
    Expr A = parse("0");
    Expr F = parse("y^2");
    auto c = integrate_ode(A, F, 0, 1, 0, 1e-3, 800);
    auto r = flow_transport_check(field("0", "1"), A, F, 0.05, c);
    CHECK(r.conclusive);
    CHECK(r.defect > 1e-2);
  }
  SUBCASE("a fold is inconclusive") {
    Expr A = parse("0");
    Expr F = parse("0");
    auto c = integrate_ode(A, F, 0, 0, 1, 1e-2, 100);
    auto r = flow_transport_check(field("-100*y", "0"), A, F, 0.5, c);
    CHECK_FALSE(r.conclusive);
  }
}
