#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lieclass/expr.hpp"

namespace lieclass {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct ParseOptions {
  // Identifiers treated as variables; every other identifier (except `pi` and
  // the function names) becomes a parameter.
  std::set<std::string> variables{"x", "y", "z", "w", "y1", "y2"};
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' power)?
//   power  := '-' power | atom
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Functions: exp, ln, sin, cos, tan, sqrt.
Expr parse(std::string_view text, const ParseOptions& options = {});

}  // namespace lieclass
