#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "lieclass/expr.hpp"

namespace lieclass {

// Raised when a branch decision needs the zero status (or sign) of a symbolic
// coefficient that the caller has not pinned down.
class AmbiguousParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ZeroStatus { Zero, NonZero, Unknown };

// Parameters are nonzero unless substituted away, so products and powers of
// parameters and nonzero constants are decidable; sums of parameters are not.
ZeroStatus zero_status(const Expr& e);
bool is_nonzero(const Expr& e);  // throws AmbiguousParameterError on Unknown

enum class ShapeFamily { Power, Quadratic, Exponential, Log, YLog, Linear, None };

const char* to_string(ShapeFamily f);

// Coefficient names per family:
//   Power, Quadratic:  r*(a*y+b)^n + c*y + s          (Quadratic has n = 2)
//   Exponential:       r*exp(a*y) + b*y + c
//   Log:               a*ln(y) + b*y + c
//   YLog:              a*y*ln(y) + b*y + c
//   Linear:            c*y + b
struct ShapeReport {
  ShapeFamily family = ShapeFamily::None;
  std::map<std::string, Expr> coeffs;
  std::string diagnostic;

  [[nodiscard]] const Expr& at(const std::string& k) const { return coeffs.at(k); }
};

ShapeReport match_shape(const Expr& F, const std::string& var = "y");
Expr reconstruct(const ShapeReport& report, const std::string& var = "y");

enum class AShape { Constant, Reciprocal, Affine, Tan, Other };

// Recognized coefficient families in x:
//   Constant:    A = M
//   Reciprocal:  A = M/(x+m)
//   Affine:      A = slope*x + m      (slope != 0)
//   Tan:         A = C*tan(a*x+b)
struct AFamily {
  AShape shape = AShape::Other;
  Expr M, m, slope, C, a, b;
};

AFamily match_a_family(const Expr& A, const std::string& var = "x");

// If e = slope*var + intercept with slope free of var, returns {slope, intercept}.
std::optional<std::pair<Expr, Expr>> affine_parts(const Expr& e, const std::string& var);

}  // namespace lieclass
