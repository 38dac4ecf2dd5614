#include "lieclass/expr.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>
#include <utility>

namespace lieclass {

struct Node {
  Kind kind = Kind::Constant;
  Rational value;
  std::string name;
  std::string arg;
  int order = 0;
  SymbolRole role = SymbolRole::Variable;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

struct NodeAccess {
  static Expr make(Node node);
  static const Node& get(const Expr& e) { return *e.node_; }
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t compute_hash(const Node& n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  h = mix(h, std::hash<std::int64_t>{}(n.value.num()));
  h = mix(h, std::hash<std::int64_t>{}(n.value.den()));
  h = mix(h, std::hash<std::string>{}(n.name));
  h = mix(h, std::hash<std::string>{}(n.arg));
  h = mix(h, std::hash<int>{}(n.order));
  for (const auto& a : n.args) h = mix(h, a.hash());
  return h;
}

Expr make_constant(const Rational& r) {
  Node n;
  n.kind = Kind::Constant;
  n.value = r;
  return NodeAccess::make(std::move(n));
}

Expr make_composite(Kind kind, std::vector<Expr> args) {
  Node n;
  n.kind = kind;
  n.args = std::move(args);
  return NodeAccess::make(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = make_constant(Rational(0));
  return z;
}

const Expr& one_expr() {
  static const Expr o = make_constant(Rational(1));
  return o;
}

bool is_const(const Expr& e) { return e.kind() == Kind::Constant; }

std::pair<Expr, Expr> base_and_exponent(const Expr& f) {
  if (f.kind() == Kind::Pow) return {f.args()[0], f.args()[1]};
  return {f, one_expr()};
}

// Builds coefficient * rest without renormalizing; `rest` must be normalized,
// non-constant, and the coefficient must differ from 0 and 1.
Expr attach_coefficient(const Rational& c, const Expr& rest) {
  std::vector<Expr> args;
  args.push_back(make_constant(c));
  if (rest.kind() == Kind::Mul) {
    for (const auto& a : rest.args()) args.push_back(a);
  } else {
    args.push_back(rest);
  }
  return make_composite(Kind::Mul, std::move(args));
}

}  // namespace

Expr NodeAccess::make(Node node) {
  node.hash = compute_hash(node);
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr::Expr() : Expr(zero_expr()) {}

Expr::Expr(Rational value) : Expr(make_constant(value)) {}

Expr::Expr(std::int64_t value) : Expr(make_constant(Rational(value))) {}

Expr Expr::variable(const std::string& name) {
  Node n;
  n.kind = Kind::Symbol;
  n.name = name;
  n.role = SymbolRole::Variable;
  return NodeAccess::make(std::move(n));
}

Expr Expr::parameter(const std::string& name) {
  Node n;
  n.kind = Kind::Symbol;
  n.name = name;
  n.role = SymbolRole::Parameter;
  return NodeAccess::make(std::move(n));
}

Expr Expr::pi() {
  Node n;
  n.kind = Kind::Named;
  n.name = "pi";
  return NodeAccess::make(std::move(n));
}

Expr Expr::function(const std::string& name, const std::string& arg, int order) {
  Node n;
  n.kind = Kind::Function;
  n.name = name;
  n.arg = arg;
  n.order = order;
  return NodeAccess::make(std::move(n));
}

Expr Expr::integral(const Expr& integrand, const std::string& var, const Rational& basepoint) {
  if (integrand.is_zero()) return Expr(0);
  Node n;
  n.kind = Kind::Integral;
  n.name = var;
  n.value = basepoint;
  n.args = {integrand};
  return NodeAccess::make(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::string& Expr::arg_var() const { return node_->arg; }
int Expr::order() const { return node_->order; }
SymbolRole Expr::role() const { return node_->role; }
std::span<const Expr> Expr::args() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_zero() const { return kind() == Kind::Constant && value().is_zero(); }
bool Expr::is_one() const { return kind() == Kind::Constant && value().is_one(); }
bool Expr::is_symbol(const std::string& n) const { return kind() == Kind::Symbol && name() == n; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Kind::Named:
      return a.name().compare(b.name());
    case Kind::Symbol:
      if (int c = a.name().compare(b.name()); c != 0) return c;
      return static_cast<int>(a.role()) - static_cast<int>(b.role());
    case Kind::Function:
      if (int c = a.name().compare(b.name()); c != 0) return c;
      if (int c = a.arg_var().compare(b.arg_var()); c != 0) return c;
      return a.order() - b.order();
    case Kind::Integral:
      if (int c = a.name().compare(b.name()); c != 0) return c;
      if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
      break;
    default:
      break;
  }
  auto aa = a.args();
  auto bb = b.args();
  const std::size_t n = std::min(aa.size(), bb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(aa[i], bb[i]); c != 0) return c;
  }
  if (aa.size() != bb.size()) return aa.size() < bb.size() ? -1 : 1;
  return 0;
}

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.kind() == Kind::Constant) return {term.value(), one_expr()};
  if (term.kind() == Kind::Mul && term.args()[0].kind() == Kind::Constant) {
    auto args = term.args();
    if (args.size() == 2) return {args[0].value(), args[1]};
    return {args[0].value(), make_composite(Kind::Mul, std::vector<Expr>(args.begin() + 1, args.end()))};
  }
  return {Rational(1), term};
}

// ---------------------------------------------------------------------------
// Normalizing constructors

Expr add(std::vector<Expr> terms) {
  Rational constant(0);
  std::vector<std::pair<Expr, Rational>> parts;
  std::function<void(const Expr&)> absorb = [&](const Expr& t) {
    if (t.kind() == Kind::Add) {
      for (const auto& a : t.args()) absorb(a);
      return;
    }
    if (t.kind() == Kind::Constant) {
      constant += t.value();
      return;
    }
    auto [c, rest] = split_coefficient(t);
    parts.emplace_back(rest, c);
  };
  for (const auto& t : terms) absorb(t);

  std::sort(parts.begin(), parts.end(), [](const auto& l, const auto& r) { return compare(l.first, r.first) < 0; });
  std::vector<Expr> out;
  if (!constant.is_zero()) out.push_back(make_constant(constant));
  for (std::size_t i = 0; i < parts.size();) {
    Rational c = parts[i].second;
    std::size_t j = i + 1;
    while (j < parts.size() && parts[j].first == parts[i].first) c += parts[j++].second;
    if (!c.is_zero()) out.push_back(c.is_one() ? parts[i].first : attach_coefficient(c, parts[i].first));
    i = j;
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out.front();
  return make_composite(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
  Rational coefficient(1);
  std::vector<Expr> flat;
  std::vector<Expr> exp_args;
  std::function<void(const Expr&)> absorb = [&](const Expr& f) {
    if (f.kind() == Kind::Mul) {
      for (const auto& a : f.args()) absorb(a);
    } else if (f.kind() == Kind::Constant) {
      coefficient *= f.value();
    } else if (f.kind() == Kind::Exp) {
      exp_args.push_back(f.args()[0]);
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) absorb(f);
  if (coefficient.is_zero()) return zero_expr();

  // Group by base, summing exponents.
  std::vector<std::pair<Expr, std::vector<Expr>>> groups;
  {
    std::vector<std::pair<Expr, Expr>> be;
    be.reserve(flat.size());
    for (const auto& f : flat) be.push_back(base_and_exponent(f));
    std::stable_sort(be.begin(), be.end(), [](const auto& l, const auto& r) { return compare(l.first, r.first) < 0; });
    for (auto& [b, e] : be) {
      if (!groups.empty() && groups.back().first == b) {
        groups.back().second.push_back(e);
      } else {
        groups.push_back({b, {e}});
      }
    }
  }

  std::vector<Expr> rebuilt;
  bool needs_another_pass = false;
  auto push_result = [&](const Expr& p) {
    if (p.kind() == Kind::Constant) {
      coefficient *= p.value();
    } else if (p.kind() == Kind::Mul || p.kind() == Kind::Exp) {
      rebuilt.push_back(p);
      needs_another_pass = true;
    } else if (!p.is_one()) {
      rebuilt.push_back(p);
    }
  };
  for (auto& [b, es] : groups) {
    Expr e = es.size() == 1 ? es.front() : add(es);
    Expr p = pow(b, e);
    if (p.kind() == Kind::Exp) {
      exp_args.push_back(p.args()[0]);
    } else {
      push_result(p);
    }
  }
  if (!exp_args.empty()) {
    // merged exponents are expanded so that exp(u)*exp(-u) folds to 1
    Expr sum = exp_args.size() == 1 ? exp_args.front() : expand(add(exp_args));
    if (!sum.is_zero()) rebuilt.push_back(make_composite(Kind::Exp, {sum}));
  }
  if (coefficient.is_zero()) return zero_expr();
  if (needs_another_pass) {
    rebuilt.push_back(make_constant(coefficient));
    return mul(std::move(rebuilt));
  }

  // Merge positive rational bases raised to a common non-integer exponent.
  {
    std::vector<Expr> others;
    std::vector<std::pair<Rational, Rational>> rational_pows;  // (exponent, base)
    for (const auto& f : rebuilt) {
      if (f.kind() == Kind::Pow && is_const(f.args()[0]) && is_const(f.args()[1]) &&
          f.args()[0].value() > Rational(0)) {
        rational_pows.emplace_back(f.args()[1].value(), f.args()[0].value());
      } else {
        others.push_back(f);
      }
    }
    if (rational_pows.size() > 1) {
      std::sort(rational_pows.begin(), rational_pows.end(),
                [](const auto& l, const auto& r) { return l.first < r.first || (l.first == r.first && l.second < r.second); });
      bool merged = false;
      std::vector<Expr> merged_factors;
      for (std::size_t i = 0; i < rational_pows.size();) {
        Rational base = rational_pows[i].second;
        std::size_t j = i + 1;
        while (j < rational_pows.size() && rational_pows[j].first == rational_pows[i].first) {
          try {
            base *= rational_pows[j].second;
            merged = true;
          } catch (const std::overflow_error&) {
            break;
          }
          ++j;
        }
        merged_factors.push_back(pow(Expr(base), Expr(rational_pows[i].first)));
        i = j;
      }
      if (merged) {
        for (auto& f : merged_factors) others.push_back(f);
        others.push_back(make_constant(coefficient));
        return mul(std::move(others));
      }
    }
  }

  std::sort(rebuilt.begin(), rebuilt.end(), [](const Expr& l, const Expr& r) {
    auto [lb, le] = base_and_exponent(l);
    auto [rb, re] = base_and_exponent(r);
    if (int c = compare(lb, rb); c != 0) return c < 0;
    return compare(le, re) < 0;
  });
  if (rebuilt.empty()) return make_constant(coefficient);
  if (coefficient.is_one() && rebuilt.size() == 1) return rebuilt.front();
  if (!coefficient.is_one()) rebuilt.insert(rebuilt.begin(), make_constant(coefficient));
  return make_composite(Kind::Mul, std::move(rebuilt));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return one_expr();
  if (exponent.is_one()) return base;
  if (base.is_one()) return one_expr();
  if (is_const(base) && is_const(exponent)) {
    const Rational& b = base.value();
    const Rational& e = exponent.value();
    if (b.is_zero()) {
      if (e > Rational(0)) return zero_expr();
      return make_composite(Kind::Pow, {base, exponent});
    }
    if (auto folded = b.pow(e)) return make_constant(*folded);
    return make_composite(Kind::Pow, {base, exponent});
  }
  const bool integer_exponent = is_const(exponent) && exponent.value().is_integer();
  switch (base.kind()) {
    case Kind::Pow: {
      const Expr& inner_base = base.args()[0];
      const Expr& inner_exp = base.args()[1];
      const bool positive_inner = is_const(inner_base) && inner_base.value() > Rational(0);
      if (integer_exponent || positive_inner) return pow(inner_base, inner_exp * exponent);
      break;
    }
    case Kind::Mul: {
      if (integer_exponent) {
        std::vector<Expr> parts;
        for (const auto& f : base.args()) parts.push_back(pow(f, exponent));
        return mul(std::move(parts));
      }
      auto [c, rest] = split_coefficient(base);
      if (c > Rational(0) && !c.is_one()) return mul({pow(Expr(c), exponent), pow(rest, exponent)});
      break;
    }
    case Kind::Exp:
      return exp(base.args()[0] * exponent);
    default:
      break;
  }
  return make_composite(Kind::Pow, {base, exponent});
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return one_expr();
  if (a.kind() == Kind::Ln) return a.args()[0];
  return make_composite(Kind::Exp, {a});
}

Expr ln(const Expr& a) {
  if (a.is_one()) return zero_expr();
  if (a.kind() == Kind::Exp) return a.args()[0];
  return make_composite(Kind::Ln, {a});
}

Expr sin(const Expr& a) {
  if (a.is_zero()) return zero_expr();
  return make_composite(Kind::Sin, {a});
}

Expr cos(const Expr& a) {
  if (a.is_zero()) return one_expr();
  return make_composite(Kind::Cos, {a});
}

Expr tan(const Expr& a) {
  if (a.is_zero()) return zero_expr();
  return make_composite(Kind::Tan, {a});
}

Expr sqrt(const Expr& a) { return pow(a, Expr(Rational(1, 2))); }

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, Expr(-1))}); }
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }

// ---------------------------------------------------------------------------
// Structural rebuilding

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  switch (e.kind()) {
    case Kind::Add:
      return add(std::move(args));
    case Kind::Mul:
      return mul(std::move(args));
    case Kind::Pow:
      return pow(args[0], args[1]);
    case Kind::Exp:
      return exp(args[0]);
    case Kind::Ln:
      return ln(args[0]);
    case Kind::Sin:
      return sin(args[0]);
    case Kind::Cos:
      return cos(args[0]);
    case Kind::Tan:
      return tan(args[0]);
    case Kind::Integral:
      return Expr::integral(args[0], e.name(), e.value());
    default:
      return e;
  }
}

template <typename Fn>
Expr map_args(const Expr& e, Fn&& fn) {
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(fn(a));
    if (args.back().id() != a.id()) changed = true;
  }
  if (!changed) return e;
  return rebuild(e, std::move(args));
}

}  // namespace

Expr normalize(const Expr& e) {
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(normalize(a));
  return rebuild(e, std::move(args));
}

Expr expand(const Expr& e) {
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(expand(a));
  if (e.kind() == Kind::Pow && args[0].kind() == Kind::Add && is_const(args[1]) &&
      args[1].value().is_integer() && args[1].value() > Rational(1) && args[1].value() <= Rational(12)) {
    std::vector<Expr> copies(static_cast<std::size_t>(args[1].value().num()), args[0]);
    return expand(make_composite(Kind::Mul, std::move(copies)));
  }
  if (e.kind() == Kind::Mul) {
    std::vector<Expr> products{one_expr()};
    for (const auto& f : args) {
      std::vector<Expr> next;
      if (f.kind() == Kind::Add) {
        for (const auto& p : products) {
          for (const auto& t : f.args()) next.push_back(mul({p, t}));
        }
      } else {
        for (const auto& p : products) next.push_back(mul({p, f}));
      }
      products = std::move(next);
    }
    Expr sum = add(std::move(products));
    // A product of expanded factors can regroup into new sums (e.g. integer
    // powers of sums produced by collection); expand until stable.
    if (sum.kind() == Kind::Add || sum.kind() == Kind::Mul) {
      for (const auto& t : sum.args()) {
        if (t.kind() == Kind::Mul) {
          for (const auto& f : t.args()) {
            if (f.kind() == Kind::Add || (f.kind() == Kind::Pow && f.args()[0].kind() == Kind::Add)) return expand(sum);
          }
        }
      }
    }
    return sum;
  }
  return rebuild(e, std::move(args));
}

// ---------------------------------------------------------------------------
// Queries

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out, int role_filter) {
  if (e.kind() == Kind::Symbol) {
    if (role_filter < 0 || static_cast<int>(e.role()) == role_filter) out.insert(e.name());
    return;
  }
  if (e.kind() == Kind::Function && role_filter != static_cast<int>(SymbolRole::Parameter)) {
    out.insert(e.arg_var());
  }
  for (const auto& a : e.args()) collect_symbols(a, out, role_filter);
  if (e.kind() == Kind::Integral && role_filter != static_cast<int>(SymbolRole::Parameter)) out.insert(e.name());
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out, -1);
  return out;
}

std::set<std::string> free_parameters(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out, static_cast<int>(SymbolRole::Parameter));
  return out;
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out, static_cast<int>(SymbolRole::Variable));
  return out;
}

std::set<std::string> free_functions(const Expr& e) {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    if (n.kind() == Kind::Function) out.insert(n.name());
    for (const auto& a : n.args()) walk(a);
  };
  walk(e);
  return out;
}

bool depends_on(const Expr& e, const std::string& name) {
  switch (e.kind()) {
    case Kind::Symbol:
      return e.name() == name;
    case Kind::Function:
      return e.arg_var() == name;
    case Kind::Integral:
      if (e.name() == name) return true;
      break;
    default:
      break;
  }
  for (const auto& a : e.args()) {
    if (depends_on(a, name)) return true;
  }
  return false;
}

bool contains_integral(const Expr& e) {
  if (e.kind() == Kind::Integral) return true;
  for (const auto& a : e.args()) {
    if (contains_integral(a)) return true;
  }
  return false;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements) {
  if (e.kind() == Kind::Symbol) {
    auto it = replacements.find(e.name());
    return it == replacements.end() ? e : it->second;
  }
  if (e.kind() == Kind::Function && replacements.count(e.arg_var())) {
    throw std::invalid_argument("cannot substitute the argument variable of opaque function " + e.name());
  }
  if (e.kind() == Kind::Integral && replacements.count(e.name())) {
    throw std::invalid_argument("cannot substitute the integration variable " + e.name());
  }
  return map_args(e, [&](const Expr& a) { return substitute(a, replacements); });
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  return substitute(e, std::map<std::string, Expr>{{name, replacement}});
}

Expr substitute_function(const Expr& e, const std::string& name, const Expr& definition) {
  if (e.kind() == Kind::Function && e.name() == name) {
    return differentiate(definition, e.arg_var(), e.order());
  }
  return map_args(e, [&](const Expr& a) { return substitute_function(a, name, definition); });
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr diff_once(const Expr& e, const std::string& v) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Named:
      return zero_expr();
    case Kind::Symbol:
      return e.name() == v ? one_expr() : zero_expr();
    case Kind::Function:
      return e.arg_var() == v ? Expr::function(e.name(), e.arg_var(), e.order() + 1) : zero_expr();
    case Kind::Integral:
      if (e.name() == v) return e.args()[0];
      return Expr::integral(diff_once(e.args()[0], v), e.name(), e.value());
    case Kind::Add: {
      std::vector<Expr> terms;
      for (const auto& t : e.args()) terms.push_back(diff_once(t, v));
      return add(std::move(terms));
    }
    case Kind::Mul: {
      auto fs = e.args();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Expr d = diff_once(fs[i], v);
        if (d.is_zero()) continue;
        std::vector<Expr> prod;
        for (std::size_t j = 0; j < fs.size(); ++j) prod.push_back(j == i ? d : fs[j]);
        terms.push_back(mul(std::move(prod)));
      }
      return add(std::move(terms));
    }
    case Kind::Pow: {
      const Expr& b = e.args()[0];
      const Expr& x = e.args()[1];
      Expr db = diff_once(b, v);
      if (!depends_on(x, v)) {
        if (db.is_zero()) return zero_expr();
        return mul({x, pow(b, x - Expr(1)), db});
      }
      Expr dx = diff_once(x, v);
      return e * (dx * ln(b) + x * db / b);
    }
    case Kind::Exp:
      return e * diff_once(e.args()[0], v);
    case Kind::Ln:
      return diff_once(e.args()[0], v) / e.args()[0];
    case Kind::Sin:
      return cos(e.args()[0]) * diff_once(e.args()[0], v);
    case Kind::Cos:
      return -sin(e.args()[0]) * diff_once(e.args()[0], v);
    case Kind::Tan: {
      Expr t = tan(e.args()[0]);
      return (Expr(1) + pow(t, Expr(2))) * diff_once(e.args()[0], v);
    }
  }
  return zero_expr();
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var, int times) {
  Expr out = e;
  for (int i = 0; i < times; ++i) out = diff_once(out, var);
  return out;
}

std::vector<Expr> polynomial_coefficients(const Expr& e, const std::string& var, int degree) {
  std::vector<Expr> out;
  Expr d = e;
  Rational factorial(1);
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) {
      d = differentiate(d, var);
      factorial *= Rational(k);
    }
    out.push_back(substitute(d, var, Expr(0)) * Expr(factorial.reciprocal()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecPow = 3;
constexpr int kPrecAtom = 4;

std::string print(const Expr& e, int context);

std::string paren_if(bool cond, const std::string& s) { return cond ? "(" + s + ")" : s; }

std::string print_constant(const Rational& r, int context) {
  const bool simple = r.is_integer() && !r.is_negative();
  return paren_if(!simple && context > kPrecMul, r.to_string());
}

std::string print_mul(const Expr& e, int context) {
  auto [coef, rest] = split_coefficient(e);
  std::vector<std::string> num;
  std::vector<std::string> den;
  std::vector<Expr> factors;
  if (rest.kind() == Kind::Mul) {
    factors.assign(rest.args().begin(), rest.args().end());
  } else {
    factors.push_back(rest);
  }
  for (const auto& f : factors) {
    if (f.kind() == Kind::Pow && is_const(f.args()[1]) && f.args()[1].value().is_negative()) {
      den.push_back(print(pow(f.args()[0], Expr(-f.args()[1].value())), kPrecPow));
    } else {
      num.push_back(print(f, kPrecPow));
    }
  }
  Rational c = coef.abs();
  std::string s;
  if (!Rational(c.num()).is_one() || num.empty()) s = std::to_string(c.num());
  for (const auto& n : num) s += (s.empty() ? "" : "*") + n;
  if (c.den() != 1) s += "/" + std::to_string(c.den());
  for (const auto& d : den) s += "/" + d;
  if (coef.is_negative()) s = "-" + s;
  return paren_if(context > kPrecMul, s);
}

std::string print(const Expr& e, int context) {
  switch (e.kind()) {
    case Kind::Constant:
      return print_constant(e.value(), context);
    case Kind::Named:
    case Kind::Symbol:
      return e.name();
    case Kind::Function:
      return e.name() + std::string(static_cast<std::size_t>(e.order()), '\'') + "(" + e.arg_var() + ")";
    case Kind::Integral:
      return "int(" + print(e.args()[0], 0) + ", " + e.name() + ", " + e.value().to_string() + ")";
    case Kind::Add: {
      std::vector<Expr> terms(e.args().begin(), e.args().end());
      // Constant term last reads more naturally.
      if (!terms.empty() && is_const(terms.front())) std::rotate(terms.begin(), terms.begin() + 1, terms.end());
      std::string s;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        auto [c, rest] = split_coefficient(terms[i]);
        if (i > 0 && c.is_negative()) {
          s += " - " + print(-terms[i], kPrecMul);
        } else {
          s += (i > 0 ? " + " : "") + print(terms[i], kPrecMul);
        }
      }
      return paren_if(context > kPrecAdd, s);
    }
    case Kind::Mul:
      return print_mul(e, context);
    case Kind::Pow: {
      const Expr& b = e.args()[0];
      const Expr& x = e.args()[1];
      if (is_const(x) && x.value() == Rational(-1)) return print_mul(e, context);
      if (is_const(x) && x.value() == Rational(1, 2)) return "sqrt(" + print(b, 0) + ")";
      const bool base_atomic = b.kind() == Kind::Symbol || b.kind() == Kind::Named || b.kind() == Kind::Function ||
                               b.kind() == Kind::Exp || b.kind() == Kind::Ln || b.kind() == Kind::Sin ||
                               b.kind() == Kind::Cos || b.kind() == Kind::Tan ||
                               (is_const(b) && b.value().is_integer() && !b.value().is_negative());
      const bool exp_atomic = x.kind() == Kind::Symbol || (is_const(x) && x.value().is_integer() && !x.value().is_negative());
      std::string s = paren_if(!base_atomic, print(b, 0)) + "^" + paren_if(!exp_atomic, print(x, 0));
      return paren_if(context > kPrecPow, s);
    }
    case Kind::Exp:
      return "exp(" + print(e.args()[0], 0) + ")";
    case Kind::Ln:
      return "ln(" + print(e.args()[0], 0) + ")";
    case Kind::Sin:
      return "sin(" + print(e.args()[0], 0) + ")";
    case Kind::Cos:
      return "cos(" + print(e.args()[0], 0) + ")";
    case Kind::Tan:
      return "tan(" + print(e.args()[0], 0) + ")";
  }
  return "?";
}

}  // namespace

std::string Expr::str() const { return print(*this, 0); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

}  // namespace lieclass
