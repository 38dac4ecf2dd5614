#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "lieclass/eval.hpp"
#include "lieclass/expr.hpp"
#include "lieclass/parse.hpp"

using namespace lieclass;

namespace {

Expr P(const char* s) { return parse(s); }

double fd(const Expr& e, const std::string& v, Bindings b, double h = 1e-5) {
  double x = b[v];
  b[v] = x + h;
  double up = evaluate(e, b);
  b[v] = x - h;
  double dn = evaluate(e, b);
  return (up - dn) / (2 * h);
}

}  // namespace

TEST_CASE("grammar cases") {
  Expr a = P("y^(-3)");
  CHECK(a.kind() == Kind::Pow);
  CHECK(a.args()[0].is_symbol("y"));
  CHECK(a.args()[1] == Expr(-3));

  Expr b = P("mu*exp(y) + lambda*y");
  REQUIRE(b.kind() == Kind::Add);
  CHECK(b.args().size() == 2);
  CHECK(b == Expr::parameter("mu") * exp(Expr::variable("y")) + Expr::parameter("lambda") * Expr::variable("y"));

  Expr c = P("5*p*tan(p*x+m)");
  REQUIRE(c.kind() == Kind::Mul);
  CHECK(c.args()[0] == Expr(5));
  CHECK(c.args().back().kind() == Kind::Tan);
  CHECK(free_parameters(c) == std::set<std::string>{"m", "p"});
  CHECK(free_variables(c) == std::set<std::string>{"x"});
}

TEST_CASE("parse errors carry a position") {
  try {
    (void)P("y + * 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS((void)P("sec(y)"), ParseError);
  CHECK_THROWS_AS((void)P("(y+1"), ParseError);
  CHECK_THROWS_AS((void)P(""), ParseError);
  CHECK_THROWS_AS((void)P("y 2"), ParseError);
}

TEST_CASE("normal form basics") {
  Expr y = Expr::variable("y");
  CHECK(P("y + y") == 2 * y);
  CHECK(P("y - y").is_zero());
  CHECK(P("2 + 3*4") == Expr(14));
  CHECK(P("y^0") == Expr(1));
  CHECK(P("y^1") == y);
  CHECK(P("0*exp(y)").is_zero());
  CHECK(P("y*y^2") == pow(y, Expr(3)));
  CHECK(P("exp(y)*exp(-y)") == Expr(1));
  CHECK(P("sqrt(4)") == Expr(2));
  CHECK(P("8^(1/3)") == Expr(2));
  CHECK(P("(-8)^(1/3)") == Expr(-2));
  CHECK(P("-y^2") == -pow(y, Expr(2)));
  CHECK(P("2^-1") == Expr(Rational(1, 2)));
  CHECK(P("x*y") == P("y*x"));
  CHECK(P("(a+b)+c") == P("a+(b+c)"));
  CHECK(P("1.5e1") == Expr(15));
}

TEST_CASE("print then parse is the identity on normal forms") {
  const char* samples[] = {"y^(-3)",       "mu*exp(y) + lambda*y", "5*p*tan(p*x+m)",     "-y^2 + 3/4*y - 1",
                           "1/(x+m)",      "(x+1)^(1/3)",          "-(n+3)/((n+1)*x)",  "sqrt(theta/2)*x",
                           "y*ln(y)",      "2*(3*y+1)^2 + y",      "exp(-x^2/2)*cos(x)", "(-2)^(1/3)*y",
                           "x^n*y^(n-1)",  "pi*x - 2",             "a/b/c",              "-(-x)^3",
                           "ln(2*y)/7",    "tan(x)^2 + 1"};
  for (const char* s : samples) {
    Expr e = P(s);
    Expr again = P(e.str().c_str());
    INFO(s << " printed as " << e.str());
    CHECK(again == e);
  }
}

TEST_CASE("normalization is idempotent") {
  const char* samples[] = {"(x+y)^2*(x-y)", "exp(2*y)*exp(y)^3", "x/(x*y)", "3*(y+1) - 3*y", "(2*x)^(1/2)*(8*x)^(1/2)"};
  for (const char* s : samples) {
    Expr e = P(s);
    CHECK(normalize(normalize(e)) == normalize(e));
    CHECK(normalize(e) == e);
  }
}

TEST_CASE("expand distributes") {
  CHECK(expand(P("(y+1)^2")) == P("y^2 + 2*y + 1"));
  CHECK(expand(P("2*(3*y+1)^2 + y")) == P("18*y^2 + 13*y + 2"));
  CHECK(expand(P("(x+1)*(x-1)")) == P("x^2 - 1"));
}

TEST_CASE("derivative examples") {
  CHECK(differentiate(P("y^n"), "y") == P("n*y^(n-1)"));
  Expr dt = differentiate(P("5*p*tan(p*x+m)"), "x");
  CHECK(expand(dt) == expand(P("5*p^2*(1 + tan(p*x+m)^2)")));
  CHECK(differentiate(P("mu*y*ln(y)"), "y") == P("mu*ln(y) + mu"));
  CHECK(differentiate(P("x^2"), "y").is_zero());
  CHECK(differentiate(Expr::function("A", "x"), "x", 2) == Expr::function("A", "x", 2));
}

TEST_CASE("derivative of tan family against finite differences") {
  Expr e = P("5*p*tan(p*x+m)");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  Expr d = differentiate(e, "x");
  for (int i = 0; i < 20; ++i) {
    Bindings b{{"x", u(rng)}, {"p", 0.7}, {"m", 0.1}};
    double exact = evaluate(d, b);
    CHECK(std::abs(exact - fd(e, "x", b)) <= 1e-7 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("evaluation") {
  CHECK(evaluate(P("y^2"), {{"y", 3}}) == 9);
  CHECK(evaluate(P("ln(y)"), {{"y", 1}}) == 0);
  CHECK_THROWS_AS(evaluate(P("ln(y)"), {{"y", -1}}), DomainError);
  CHECK_THROWS_AS(evaluate(P("y^(-1)"), {{"y", 0}}), DomainError);
  CHECK_THROWS_AS(evaluate(P("y^(1/2)"), {{"y", -4}}), DomainError);
  CHECK(evaluate(P("y^(1/3)"), {{"y", -8}}) == doctest::Approx(-2));
  CHECK_THROWS_AS(evaluate(P("y + z"), {{"y", 1}}), UnboundSymbolError);
  CHECK(evaluate(P("pi"), {}) == doctest::Approx(M_PI));
  EvalOptions guard;
  guard.pole_guard = 1e-3;
  CHECK_THROWS_AS(evaluate(P("1/x"), {{"x", 1e-4}}, guard), DomainError);
}

TEST_CASE("antiderivative nodes are evaluated by quadrature") {
  Expr x = Expr::variable("x");
  Expr I = Expr::integral(cos(x), "x", Rational(0));
  EvalContext ctx;
  for (double t : {0.3, 1.2, -0.7, 1.1}) {
    CHECK(std::abs(evaluate(I, {{"x", t}}, {}, &ctx) - std::sin(t)) < 1e-9);
  }
  CHECK(differentiate(I, "x") == cos(x));
  // Nested: int exp(int 1) = e^x - 1 with basepoint 0.
  Expr nested = Expr::integral(exp(Expr::integral(Expr(1), "x", Rational(0))), "x", Rational(0));
  CHECK(std::abs(evaluate(nested, {{"x", 1.5}}, {}, &ctx) - (std::exp(1.5) - 1)) < 1e-8);
}

TEST_CASE("random derivative oracle") {
  // Random trees over the node vocabulary, compared with central differences.
  std::mt19937_64 rng(0xC1A551F1);
  Expr x = Expr::variable("x");
  Expr y = Expr::variable("y");
  std::function<Expr(int)> gen = [&](int depth) -> Expr {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 10);
    std::uniform_int_distribution<int> small(-3, 3);
    switch (pick(rng)) {
      case 0: return x;
      case 1: return y;
      case 2: return Expr(Rational(small(rng), 2));
      case 3: return gen(depth - 1) + gen(depth - 1);
      case 4: return gen(depth - 1) * gen(depth - 1);
      case 5: return pow(gen(depth - 1), Expr(small(rng)));
      case 6: return exp(gen(depth - 1) / Expr(4));
      case 7: return ln(Expr(2) + pow(gen(depth - 1), Expr(2)));
      case 8: return sin(gen(depth - 1));
      case 9: return cos(gen(depth - 1));
      default: return tan(gen(depth - 1) / Expr(5));
    }
  };
  std::uniform_real_distribution<double> ux(-2, 2);
  std::uniform_real_distribution<double> uy(0.2, 3);
  EvalOptions guard;
  guard.pole_guard = 1e-3;
  int checked = 0;
  int attempts = 0;
  while (checked < 100 && attempts < 5000) {
    ++attempts;
    Expr e = gen(3);
    std::string v = (attempts % 2) ? "x" : "y";
    Bindings b{{"x", ux(rng)}, {"y", uy(rng)}};
    double exact;
    double approx;
    try {
      exact = evaluate(differentiate(e, v), b, guard);
      approx = fd(e, v, b);
      // stay away from singularities: the finite difference stencil must be well-behaved
      Bindings wide = b;
      wide[v] += 1e-3;
      (void)evaluate(e, wide, guard);
      wide[v] -= 2e-3;
      (void)evaluate(e, wide, guard);
    } catch (const DomainError&) {
      continue;
    }
    if (std::abs(exact) > 1e6) continue;
    ++checked;
    INFO(e.str() << " d/d" << v);
    CHECK(std::abs(exact - approx) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
  CHECK(checked == 100);
}
