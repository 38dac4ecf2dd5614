#pragma once

#include <string>
#include <utility>

#include "lieclass/expr.hpp"
#include "lieclass/shape.hpp"

namespace lieclass {

// x = k1*z + k2, y = k3*w + k4 with k1*k3 != 0.
struct EquivalenceMap {
  Expr k1{1}, k2{0}, k3{1}, k4{0};

  static EquivalenceMap identity() { return {}; }
  void validate() const;  // throws std::invalid_argument if k1 or k3 vanishes
  [[nodiscard]] bool is_identity() const;
};

// Image (B(z), H(w)) of the pair (A(x), F(y)):
//   B(z) = k1*A(k1*z + k2),  H(w) = (k1^2/k3)*F(k3*w + k4).
std::pair<Expr, Expr> act_on_coefficients(const Expr& A, const Expr& F, const EquivalenceMap& g,
                                          const std::string& x = "x", const std::string& y = "y",
                                          const std::string& z = "z", const std::string& w = "w");

EquivalenceMap invert(const EquivalenceMap& g);

// Acting by `first` and then by `second` is the same as acting by compose(first, second).
EquivalenceMap compose(const EquivalenceMap& first, const EquivalenceMap& second);

enum class CanonicalTag {
  Linear,
  ExpPlusLinear,
  ExpPlusConst,
  LogPlusLinear,
  YLogYPlusConst,
  PowerPlusLinear,
  QuadraticPlusConst,
  Generic,
};

const char* to_string(CanonicalTag t);

// Canonical representatives, written in y:
//   Linear              lambda*y + theta    (lambda != 0 gives theta = 0; else theta in {0, 1})
//   ExpPlusLinear       mu*exp(y) + lambda*y
//   ExpPlusConst        mu*exp(y) + theta
//   LogPlusLinear       mu*ln(y) + lambda*y
//   YLogYPlusConst      mu*y*ln(y) + theta
//   PowerPlusLinear     y^n + lambda*y + theta
//   QuadraticPlusConst  y^2 + theta
struct CanonicalF {
  CanonicalTag tag = CanonicalTag::Generic;
  Expr mu{1}, lambda{0}, theta{0}, n{0};
  Expr canonical;            // the representative in the variable y
  EquivalenceMap witness;    // acts on y only: k1 = 1, k2 = 0
  ShapeReport shape;
  std::string diagnostic;
};

CanonicalF canonicalize_F(const Expr& F, const std::string& y = "y");

// For w'' + f(x) w' + g(x) w = 0, the substitution w = gauge * v gives
// v'' + h(x) v = 0 with h = -(f^2 - 4g + 2f')/4 and gauge = exp(-(1/2) int f dx).
struct LinearReduction {
  Expr h;
  Expr gauge;
};

LinearReduction reduce_linear_ode(const Expr& f, const Expr& g, const std::string& x = "x");

}  // namespace lieclass
