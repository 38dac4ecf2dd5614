#include <cmath>
#include <random>

#include "doctest.h"
#include "lieclass/eval.hpp"
#include "lieclass/parse.hpp"
#include "lieclass/shape.hpp"

using namespace lieclass;

namespace {

Expr P(const char* s) { return parse(s); }

void check_reconstruction(const Expr& F, const ShapeReport& rep, const Bindings& params) {
  Expr back = reconstruct(rep);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uy(0.2, 3);
  for (int i = 0; i < 50; ++i) {
    Bindings b = params;
    b["y"] = uy(rng);
    CHECK(std::abs(evaluate(back, b) - evaluate(F, b)) < 1e-10 * std::max(1.0, std::abs(evaluate(F, b))));
  }
}

}  // namespace

TEST_CASE("shape read-off examples") {
  auto q = match_shape(P("2*(3*y+1)^2 + y"));
  CHECK(q.family == ShapeFamily::Quadratic);
  CHECK(q.at("r") == Expr(2));
  CHECK(q.at("a") == Expr(3));
  CHECK(q.at("b") == Expr(1));
  CHECK(q.at("n") == Expr(2));
  CHECK(q.at("c") == Expr(1));
  CHECK(q.at("s") == Expr(0));

  auto e = match_shape(P("4*exp(2*y) + 3*y - 1"));
  CHECK(e.family == ShapeFamily::Exponential);
  CHECK(e.at("r") == Expr(4));
  CHECK(e.at("a") == Expr(2));
  CHECK(e.at("b") == Expr(3));
  CHECK(e.at("c") == Expr(-1));

  auto p = match_shape(P("y^5 - 7"));
  CHECK(p.family == ShapeFamily::Power);
  CHECK(p.at("r") == Expr(1));
  CHECK(p.at("a") == Expr(1));
  CHECK(p.at("b") == Expr(0));
  CHECK(p.at("n") == Expr(5));
  CHECK(p.at("c") == Expr(0));
  CHECK(p.at("s") == Expr(-7));
}

TEST_CASE("other families") {
  CHECK(match_shape(P("mu*y*ln(y)")).family == ShapeFamily::YLog);
  CHECK(match_shape(P("ln(y) + y")).family == ShapeFamily::Log);
  CHECK(match_shape(P("3*y - 2")).family == ShapeFamily::Linear);
  CHECK(match_shape(P("0")).family == ShapeFamily::Linear);
  CHECK(match_shape(P("2*y^2+4*y+1")).family == ShapeFamily::Quadratic);
  CHECK(match_shape(P("(y+1)*(y+3)")).family == ShapeFamily::Quadratic);
  CHECK(match_shape(P("y^n + lambda*y")).family == ShapeFamily::Power);
  CHECK(match_shape(P("y^3 + y^2")).family == ShapeFamily::None);
  CHECK(match_shape(P("sin(y)")).family == ShapeFamily::None);
  CHECK(match_shape(P("y*exp(y)")).family == ShapeFamily::None);
  CHECK(match_shape(P("exp(y) + ln(y)")).family == ShapeFamily::None);
}

TEST_CASE("reconstruction agrees pointwise") {
  const char* samples[] = {"2*(3*y+1)^2 + y", "4*exp(2*y) + 3*y - 1", "y^5 - 7", "mu*exp(2*y+1) - 3", "ln(2*y) + y",
                           "3*y*ln(5*y) - y + 2", "(2*y+1)^(-3) + 4*y", "sqrt(y) - 1", "7*y - 1"};
  Bindings params{{"mu", 1.7}};
  for (const char* s : samples) {
    Expr F = P(s);
    auto rep = match_shape(F);
    INFO(s);
    REQUIRE(rep.family != ShapeFamily::None);
    check_reconstruction(F, rep, params);
  }
}

TEST_CASE("zero status") {
  CHECK(zero_status(P("0")) == ZeroStatus::Zero);
  CHECK(zero_status(P("3*mu^2")) == ZeroStatus::NonZero);
  CHECK(zero_status(P("mu - lambda")) == ZeroStatus::Unknown);
  CHECK(zero_status(P("sqrt(2) - 1")) == ZeroStatus::NonZero);
  CHECK_THROWS_AS(is_nonzero(P("mu + 1")), AmbiguousParameterError);
}

TEST_CASE("A families") {
  auto c = match_a_family(P("M"));
  CHECK(c.shape == AShape::Constant);
  auto r = match_a_family(P("-15/(x+m)"));
  CHECK(r.shape == AShape::Reciprocal);
  CHECK(r.M == Expr(-15));
  CHECK(r.m == P("m"));
  auto r2 = match_a_family(P("3/(2*x+4)"));
  CHECK(r2.shape == AShape::Reciprocal);
  CHECK(r2.M == Expr(Rational(3, 2)));
  CHECK(r2.m == Expr(2));
  auto r3 = match_a_family(P("-(8/6)/x"));
  CHECK(r3.shape == AShape::Reciprocal);
  CHECK(r3.M == Expr(Rational(-4, 3)));
  CHECK(r3.m.is_zero());
  auto a = match_a_family(P("lambda*x + m"));
  CHECK(a.shape == AShape::Affine);
  CHECK(a.slope == P("lambda"));
  auto t = match_a_family(P("5*p*tan(p*x+m)"));
  CHECK(t.shape == AShape::Tan);
  CHECK(t.C == P("5*p"));
  CHECK(t.a == P("p"));
  CHECK(t.b == P("m"));
  CHECK(match_a_family(P("x^2")).shape == AShape::Other);
  CHECK(match_a_family(P("1/x^2")).shape == AShape::Other);
}
