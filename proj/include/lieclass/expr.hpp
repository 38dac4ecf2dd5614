#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieclass/rational.hpp"

namespace lieclass {

enum class Kind : std::uint8_t {
  Constant,  // exact rational
  Named,     // named symbolic constant (pi)
  Symbol,    // variable or parameter
  Function,  // opaque function of one variable, possibly differentiated: A(x), alpha''(x)
  Integral,  // antiderivative of args[0] in `name`, anchored at `basepoint`
  Pow,
  Mul,
  Add,
  Exp,
  Ln,
  Sin,
  Cos,
  Tan,
};

enum class SymbolRole : std::uint8_t { Variable, Parameter };

struct Node;

// Immutable, normalized expression tree. Every Expr produced by the public
// constructors and operators is already in normal form: Add/Mul are flattened
// and sorted, constants are folded, like terms and like factors are collected.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(Rational value);  // NOLINT(google-explicit-constructor)
  Expr(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<std::int64_t>(value)) {}  // NOLINT(google-explicit-constructor)

  static Expr variable(const std::string& name);
  static Expr parameter(const std::string& name);
  static Expr pi();
  // Opaque function `name` of the single variable `arg`, differentiated `order` times.
  static Expr function(const std::string& name, const std::string& arg, int order = 0);
  // Antiderivative of `integrand` with respect to `var`, vanishing at `basepoint`.
  static Expr integral(const Expr& integrand, const std::string& var, const Rational& basepoint);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] const Rational& value() const;      // Constant, Integral basepoint
  [[nodiscard]] const std::string& name() const;    // Symbol, Function, Named, Integral variable
  [[nodiscard]] const std::string& arg_var() const; // Function argument variable
  [[nodiscard]] int order() const;                  // Function derivative order
  [[nodiscard]] SymbolRole role() const;            // Symbol
  [[nodiscard]] std::span<const Expr> args() const;
  [[nodiscard]] std::size_t hash() const;

  [[nodiscard]] bool is_constant() const { return kind() == Kind::Constant; }
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_one() const;
  [[nodiscard]] bool is_symbol(const std::string& n) const;

  // Pointer identity of the underlying node; stable for the Expr's lifetime.
  [[nodiscard]] const Node* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  [[nodiscard]] std::string str() const;

 private:
  friend struct NodeAccess;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Total structural order used for canonical sorting. Returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Normalizing constructors.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr sqrt(const Expr& a);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Rebuilds the tree through the normalizing constructors. Idempotent.
Expr normalize(const Expr& e);

// Distributes products over sums and expands non-negative integer powers of sums.
Expr expand(const Expr& e);

// Names of all symbols (variables and parameters) occurring in `e`.
std::set<std::string> free_symbols(const Expr& e);
std::set<std::string> free_parameters(const Expr& e);
std::set<std::string> free_variables(const Expr& e);
// Names of opaque functions occurring in `e`.
std::set<std::string> free_functions(const Expr& e);
[[nodiscard]] bool depends_on(const Expr& e, const std::string& name);
[[nodiscard]] bool contains_integral(const Expr& e);

// Simultaneous replacement of symbols by expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements);
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

// Replaces every occurrence of the opaque function `name` (and its derivatives)
// by the corresponding derivative of `definition`, a function of the
// function's argument variable.
Expr substitute_function(const Expr& e, const std::string& name, const Expr& definition);

// Exact symbolic derivative with respect to the symbol `var`.
Expr differentiate(const Expr& e, const std::string& var, int times = 1);

// Splits a normalized term into rational coefficient and remaining product.
std::pair<Rational, Expr> split_coefficient(const Expr& term);

// Coefficients of `e` as a polynomial in `var` up to `degree`, computed by
// repeated differentiation at var = 0. Only meaningful when `e` is polynomial in `var`.
std::vector<Expr> polynomial_coefficients(const Expr& e, const std::string& var, int degree);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace lieclass
