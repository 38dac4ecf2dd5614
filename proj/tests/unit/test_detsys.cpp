#include <cmath>
#include <random>

#include "doctest.h"
#include "lieclass/detsys.hpp"
#include "lieclass/parse.hpp"

using namespace lieclass;

namespace {

Expr P(const char* s) { return parse(s); }

VectorField V(const char* xi, const char* phi) { return {P(xi), P(phi)}; }

std::vector<Expr> all(const DeterminingSystem& s) { return {s.residuals.begin(), s.residuals.end()}; }

Expr random_poly(std::mt19937_64& rng, int degree, const char* var = "x") {
  std::uniform_int_distribution<int> c(-4, 4);
  std::vector<Expr> terms;
  for (int k = 0; k <= degree; ++k) terms.push_back(Expr(Rational(c(rng), 2)) * pow(Expr::variable(var), Expr(k)));
  return add(terms);
}

SampleGrid small_grid() {
  SampleGrid g;
  g.nx = 20;
  g.ny = 10;
  return g;
}

}  // namespace

TEST_CASE("determining system examples") {
  auto s = build_determining_system(P("0"), P("0"), V("1", "0"));
  for (const auto& r : s.residuals) CHECK(r.is_zero());
  auto t = build_determining_system(P("M"), Expr::function("F", "y"), V("1", "0"));
  for (const auto& r : t.residuals) CHECK(r.is_zero());
  auto u = build_determining_system(P("0"), P("y^(-3)"), V("2*x", "y"));
  for (const auto& r : u.residuals) CHECK(r.is_zero());
  auto w = build_determining_system(P("M/x"), P("mu*exp(y)"), V("x", "-2"));
  CHECK(residual_max(all(w), SampleGrid::standard(), {{"M", 3}, {"mu", 1}}) < 1e-10);
}

TEST_CASE("reduced ansatz") {
  auto a = reduced_ansatz(P("0"));
  CHECK(a.phi == P("y^2") * opaque("alpha", 1) + P("y") * opaque("sigma") + opaque("tau"));
  auto m = reduced_ansatz(P("M"));
  CHECK(m.phi == P("y^2") * (P("M") * opaque("alpha") + opaque("alpha", 1)) + P("y") * opaque("sigma") + opaque("tau"));
  auto z = reduced_ansatz(opaque_A());
  Expr xi0 = substitute_function(z.xi, "alpha", P("0"));
  CHECK(xi0 == opaque("beta"));
}

TEST_CASE("ansatz substitution reproduces the reduced residuals") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Expr A = random_poly(rng, 2);
    Expr F = random_poly(rng, 3, "y") + P("exp(y/2)");
    std::map<std::string, Expr> defs{{"alpha", random_poly(rng, 2)}, {"beta", random_poly(rng, 3)},
                                     {"sigma", random_poly(rng, 2)}, {"tau", random_poly(rng, 2)}};
    auto concrete = [&](Expr e) {
      for (const auto& [name, def] : defs) e = substitute_function(e, name, def);
      return e;
    };
    VectorField ans = reduced_ansatz(A);
    VectorField v{concrete(ans.xi), concrete(ans.phi)};
    auto sys = build_determining_system(A, F, v);
    auto red = reduced_residuals(A, F);
    CHECK(residual_max({sys.residuals[0], sys.residuals[3]}, small_grid()) < 1e-9);
    CHECK(residual_max({sys.residuals[1] - concrete(red[0]), sys.residuals[2] - concrete(red[1])}, small_grid()) < 1e-9);
    Expr second = differentiate(red[0], "y", 2) + Expr(3) * differentiate(F, "y", 2) * opaque("alpha");
    CHECK(concrete(second).is_zero());
  }
}

TEST_CASE("condition examples") {
  ConditionContext zero_theta{Expr(0), std::nullopt, std::nullopt};
  CHECK(instantiate(condition("E4", zero_theta).expr, P("0")).is_zero());
  Expr E2 = instantiate(condition("E2", zero_theta).expr, P("-15/(x+m)"));
  CHECK(residual_max({E2}, SampleGrid::standard(), {{"m", 0.37}}) < 1e-8);
  for (const char* p : {"0", "-10/3", "-5/3"}) {
    Expr A = parse(std::string(p) + "/(x+m)");
    CHECK(zero_condition(instantiate(condition("E2", zero_theta).expr, A), SampleGrid::standard(), {{"m", 0.37}})
              .verdict == Verdict::Holds);
  }
  ConditionContext theta{P("theta"), std::nullopt, std::nullopt};
  Expr E4 = instantiate(condition("E4", theta).expr, P("sqrt(theta/2)*tan(sqrt(theta/2)*(x+2*m))"));
  CHECK(residual_max({E4}, SampleGrid::standard(), {{"theta", 0.5}, {"m", 0.1}}) < 1e-8);
  CHECK_THROWS_AS(condition("E5", theta), std::invalid_argument);
  CHECK_THROWS_AS(condition("E9", theta), std::invalid_argument);
}

TEST_CASE("structural identities") {
  std::mt19937_64 rng(2024);
  const Expr x = Expr::variable("x");
  auto d = [](const Expr& e) { return differentiate(e, "x"); };
  for (int trial = 0; trial < 10; ++trial) {
    Expr A = random_poly(rng, 3);
    ConditionContext th{Expr(Rational(3, 2)), Expr(Rational(-2, 3)), std::nullopt};
    Expr E1 = instantiate(condition("E1", th).expr, A);
    Expr E2 = instantiate(condition("E2", th).expr, A);
    Expr E3 = instantiate(condition("E3", th).expr, A);
    Expr E4 = instantiate(condition("E4", th).expr, A);
    CHECK(expand(E1 + Expr(5) * d(E2) - Expr(4) * A * E2).is_zero());
    CHECK(expand(d(E4) + Expr(2) * E3 - Expr(2) * A * E4).is_zero());
    for (int n : {-2, 3, 5}) {
      ConditionContext c{std::nullopt, Expr(Rational(-2, 3)), Expr(n)};
      Expr E5 = instantiate(condition("E5", c).expr, A);
      Expr E6 = instantiate(condition("E6", c).expr, A);
      CHECK(expand(Expr(2) * E5 - Expr(3 + n) * d(E6) + Expr(2 * (n - 1)) * A * E6).is_zero());
    }
    Expr alpha = random_poly(rng, 3);
    Expr E7 = substitute_function(instantiate(condition("E7", th).expr, A), "alpha", alpha);
    Expr E8 = substitute_function(instantiate(condition("E8", th).expr, A), "alpha", alpha);
    CHECK(expand(E7 - d(E8) + A * E8).is_zero());
  }
}

TEST_CASE("residual_max") {
  CHECK(residual_max({P("0")}, SampleGrid::standard()) == 0);
  Expr A = P("x^3 + 2*x");
  ConditionContext th{Expr(1), std::nullopt, std::nullopt};
  Expr E1 = instantiate(condition("E1", th).expr, A);
  Expr E2 = instantiate(condition("E2", th).expr, A);
  CHECK(residual_max({E1 + Expr(5) * differentiate(E2, "x") - Expr(4) * A * E2}, SampleGrid::standard()) < 1e-8);
  CHECK_THROWS_AS(residual_max({P("ln(-1 - x^2)")}, SampleGrid::standard()), DegenerateDomainError);
  auto stats = residual_stats({P("1/x")}, SampleGrid::standard());
  CHECK(stats.points == 50);
}

TEST_CASE("rank and verdict helpers") {
  CHECK(verdict_of(1e-9) == Verdict::Holds);
  CHECK(verdict_of(1e-2) == Verdict::Violated);
  CHECK(verdict_of(1e-5) == Verdict::Indeterminate);
  auto r = column_rank({P("x"), P("2*x"), P("x^2")}, SampleGrid::standard());
  CHECK(r.rank == 2);
  CHECK(r.deficient == Verdict::Holds);
  auto f = column_rank({P("1"), P("x"), P("exp(x)")}, SampleGrid::standard());
  CHECK(f.rank == 3);
  CHECK(f.deficient == Verdict::Violated);
  auto a = affine_condition(P("x + 3"), P("1"), SampleGrid::standard());
  CHECK(a.verdict == Verdict::Violated);
  auto b = affine_condition(P("2*x^2 + 6"), P("x^2 + 3"), SampleGrid::standard());
  CHECK(b.verdict == Verdict::Holds);
  CHECK(b.d == doctest::Approx(-2));
}
