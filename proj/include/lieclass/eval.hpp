#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lieclass/expr.hpp"

namespace lieclass {

using Bindings = std::map<std::string, double>;

class UnboundSymbolError : public std::runtime_error {
 public:
  explicit UnboundSymbolError(const std::string& name)
      : std::runtime_error("unbound symbol: " + name), name_(name) {}
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Raised when a point lies outside the domain of the expression (ln of a
// non-positive number, a pole, an even root of a negative number, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalOptions {
  // Points closer than this to a pole or a logarithmic branch point are rejected.
  double pole_guard = 0.0;
  double quadrature_tolerance = 1e-10;
};

// Memo for antiderivative nodes. Valid only while the bindings of every symbol
// other than the integration variable stay fixed; the caller owns it.
class EvalContext {
 public:
  void clear() { table_.clear(); }

 private:
  friend struct IntegralEvaluator;
  struct Entry {
    Expr node;  // keeps the node address valid
    std::vector<std::string> others;
    std::map<std::vector<double>, std::map<double, double>> values;
  };
  std::unordered_map<const void*, Entry> table_;
};

double evaluate(const Expr& e, const Bindings& bindings, const EvalOptions& options = {},
                EvalContext* context = nullptr);

}  // namespace lieclass
