#include <cmath>
#include <random>

#include "doctest.h"
#include "lieclass/equivalence.hpp"
#include "lieclass/eval.hpp"
#include "lieclass/parse.hpp"

using namespace lieclass;

namespace {

Expr P(const char* s) { return parse(s); }

EquivalenceMap map_of(Rational a, Rational b, Rational c, Rational d) {
  EquivalenceMap g;
  g.k1 = Expr(a);
  g.k2 = Expr(b);
  g.k3 = Expr(c);
  g.k4 = Expr(d);
  return g;
}

EquivalenceMap random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  auto nz = [&] {
    int n = 0;
    while (n == 0) n = num(rng);
    return Rational(n, den(rng));
  };
  return map_of(nz(), Rational(num(rng), den(rng)), nz(), Rational(num(rng), den(rng)));
}

Expr rename(const Expr& e, const char* from, const char* to) { return substitute(e, from, Expr::variable(to)); }

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("action examples") {
  auto [B, H] = act_on_coefficients(P("0"), P("y^(-3)"), EquivalenceMap::identity());
  CHECK(B.is_zero());
  CHECK(H == P("w^(-3)"));

  EquivalenceMap g;
  g.k1 = P("k1");
  g.k3 = P("k3");
  auto [B2, H2] = act_on_coefficients(P("M/x"), P("y^n"), g);
  CHECK(B2 == P("M/z"));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    Bindings b{{"k1", u(rng)}, {"k3", u(rng)}, {"n", 3}, {"w", u(rng)}};
    double expect = b["k1"] * b["k1"] / b["k3"] * std::pow(b["k3"] * b["w"], 3);
    CHECK(rel_diff(evaluate(H2, b), expect) < 1e-12);
  }

  auto [B3, H3] = act_on_coefficients(P("0"), P("2*y^2+4*y+1"), map_of(1, 0, Rational(1, 2), -1));
  CHECK(expand(H3) == P("w^2 - 2"));
}

TEST_CASE("invert and compose") {
  auto id = invert(EquivalenceMap::identity());
  CHECK(id.is_identity());
  auto h = invert(map_of(2, 0, 1, 0));
  CHECK(h.k1 == Expr(Rational(1, 2)));
  auto g = invert(map_of(2, 3, 5, 7));
  CHECK(g.k1 == Expr(Rational(1, 2)));
  CHECK(g.k2 == Expr(Rational(-3, 2)));
  CHECK(g.k3 == Expr(Rational(1, 5)));
  CHECK(g.k4 == Expr(Rational(-7, 5)));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto m = random_map(rng);
    auto c = compose(m, invert(m));
    CHECK(c.is_identity());
  }
  CHECK_THROWS_AS(map_of(0, 1, 1, 0).validate(), std::invalid_argument);
}

TEST_CASE("round trip and composition agree pointwise") {
  Expr A = P("x^2 + 3*x - 1");
  Expr F = P("exp(y/3) + y^3 - 2*y");
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    auto g = random_map(rng);
    auto [B, H] = act_on_coefficients(A, F, g);
    auto [A2, F2] = act_on_coefficients(rename(B, "z", "x"), rename(H, "w", "y"), invert(g));
    auto h = random_map(rng);
    auto [B3, H3] = act_on_coefficients(rename(B, "z", "x"), rename(H, "w", "y"), h);
    auto [B4, H4] = act_on_coefficients(A, F, compose(g, h));
    for (int j = 0; j < 50; ++j) {
      double t = u(rng);
      CHECK(rel_diff(evaluate(A2, {{"z", t}}), evaluate(A, {{"x", t}})) < 1e-10);
      CHECK(rel_diff(evaluate(F2, {{"w", t}}), evaluate(F, {{"y", t}})) < 1e-10);
      CHECK(rel_diff(evaluate(B3, {{"z", t}}), evaluate(B4, {{"z", t}})) < 1e-10);
      CHECK(rel_diff(evaluate(H3, {{"w", t}}), evaluate(H4, {{"w", t}})) < 1e-10);
    }
  }
}

TEST_CASE("only the identity fixes a transcendental pair") {
  Expr A = P("tan(x)");
  Expr F = P("exp(y)");
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    auto g = random_map(rng);
    if (g.is_identity()) continue;
    auto [B, H] = act_on_coefficients(A, F, g);
    bool differs = false;
    for (double t : {0.1, 0.2, 0.3, 0.45, 0.7}) {
      try {
        if (std::abs(evaluate(B, {{"z", t}}) - std::tan(t)) > 1e-8) differs = true;
      } catch (const DomainError&) {
        differs = true;
      }
      if (std::abs(evaluate(H, {{"w", t}}) - std::exp(t)) > 1e-8) differs = true;
    }
    CHECK(differs);
  }
}

TEST_CASE("canonical forms") {
  auto q = canonicalize_F(P("2*y^2+4*y+1"));
  CHECK(q.tag == CanonicalTag::QuadraticPlusConst);
  CHECK(q.theta == Expr(-2));
  CHECK(q.witness.k3 == Expr(Rational(1, 2)));
  CHECK(q.witness.k4 == Expr(-1));
  auto [B, H] = act_on_coefficients(P("0"), P("2*y^2+4*y+1"), q.witness);
  CHECK(expand(rename(H, "w", "y")) == q.canonical);

  auto lin = canonicalize_F(P("3*y + 6"));
  CHECK(lin.tag == CanonicalTag::Linear);
  CHECK(lin.mu == Expr(3));
  CHECK(lin.witness.k4 == Expr(-2));
  CHECK(canonicalize_F(P("5")).theta == Expr(1));
  CHECK(canonicalize_F(P("0")).theta == Expr(0));

  auto e = canonicalize_F(P("4*exp(2*y) + 3*y - 1"));
  CHECK(e.tag == CanonicalTag::ExpPlusLinear);
  CHECK(e.lambda == Expr(3));
  CHECK(canonicalize_F(P("mu*exp(y)")).tag == CanonicalTag::ExpPlusConst);
  CHECK(canonicalize_F(P("y^5")).tag == CanonicalTag::PowerPlusLinear);
  CHECK(canonicalize_F(P("-y^3")).tag == CanonicalTag::Generic);
  CHECK(canonicalize_F(P("-y^4")).tag == CanonicalTag::PowerPlusLinear);
  CHECK(canonicalize_F(P("ln(y) + y")).tag == CanonicalTag::LogPlusLinear);
  CHECK(canonicalize_F(P("y*ln(y) - 2")).tag == CanonicalTag::YLogYPlusConst);
  CHECK(canonicalize_F(P("sin(y)")).tag == CanonicalTag::Generic);
  CHECK_THROWS_AS(canonicalize_F(P("exp(y) + (a-b)*y")), AmbiguousParameterError);
}

TEST_CASE("witness reproduces the canonical expression") {
  const char* samples[] = {"3*(2*y+1)^5 - 4*y + 2", "4*exp(2*y) + 3*y - 1", "2*exp(-y/2) + 5", "3*ln(y) - 2*y + 1",
                           "2*y*ln(y) + 3*y - 1",  "2*y^2+4*y+1",         "(y-1)^(-3) + y",   "7*y - 3", "4",
                           "2*(y+1)^(1/3) + 1/2"};
  std::uniform_real_distribution<double> u(0.3, 2.5);
  std::mt19937_64 rng(31);
  for (const char* s : samples) {
    Expr F = P(s);
    auto c = canonicalize_F(F);
    INFO(s);
    REQUIRE(c.tag != CanonicalTag::Generic);
    auto [B, H] = act_on_coefficients(P("0"), F, c.witness);
    for (int i = 0; i < 50; ++i) {
      double t = u(rng);
      double lhs;
      try {
        lhs = evaluate(H, {{"w", t}});
      } catch (const DomainError&) {
        continue;
      }
      CHECK(rel_diff(lhs, evaluate(c.canonical, {{"y", t}})) < 1e-10);
    }
  }
}

TEST_CASE("linear reduction") {
  CHECK(reduce_linear_ode(P("0"), P("1")).h == Expr(1));
  CHECK(reduce_linear_ode(P("2"), P("0")).h == Expr(-1));
  CHECK(reduce_linear_ode(P("2/x"), P("0")).h.is_zero());
  auto r = reduce_linear_ode(P("2"), P("0"));
  CHECK(std::abs(evaluate(r.gauge, {{"x", 1.0}}) - std::exp(-1.0)) < 1e-10);
}
