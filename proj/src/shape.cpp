#include "lieclass/shape.hpp"

#include <cmath>

#include "lieclass/eval.hpp"

namespace lieclass {

ZeroStatus zero_status(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
      return e.is_zero() ? ZeroStatus::Zero : ZeroStatus::NonZero;
    case Kind::Named:
    case Kind::Exp:
      return ZeroStatus::NonZero;
    case Kind::Symbol:
      return e.role() == SymbolRole::Parameter ? ZeroStatus::NonZero : ZeroStatus::Unknown;
    case Kind::Mul: {
      ZeroStatus out = ZeroStatus::NonZero;
      for (const auto& f : e.args()) {
        ZeroStatus s = zero_status(f);
        if (s == ZeroStatus::Zero) return ZeroStatus::Zero;
        if (s == ZeroStatus::Unknown) out = ZeroStatus::Unknown;
      }
      if (out == ZeroStatus::NonZero) return out;
      break;
    }
    case Kind::Pow:
      if (zero_status(e.args()[0]) == ZeroStatus::NonZero) return ZeroStatus::NonZero;
      break;
    default:
      break;
  }
  if (free_symbols(e).empty()) {
    try {
      double v = evaluate(e, {});
      if (std::abs(v) > 1e-12) return ZeroStatus::NonZero;
    } catch (const std::exception&) {
    }
  }
  return ZeroStatus::Unknown;
}

bool is_nonzero(const Expr& e) {
  switch (zero_status(e)) {
    case ZeroStatus::Zero:
      return false;
    case ZeroStatus::NonZero:
      return true;
    case ZeroStatus::Unknown:
      break;
  }
  throw AmbiguousParameterError("cannot decide whether " + e.str() +
                                " vanishes; give its parameters numeric values or declare them zero");
}

const char* to_string(ShapeFamily f) {
  switch (f) {
    case ShapeFamily::Power: return "power";
    case ShapeFamily::Quadratic: return "quadratic";
    case ShapeFamily::Exponential: return "exponential";
    case ShapeFamily::Log: return "log";
    case ShapeFamily::YLog: return "ylog";
    case ShapeFamily::Linear: return "linear";
    case ShapeFamily::None: return "none";
  }
  return "none";
}

std::optional<std::pair<Expr, Expr>> affine_parts(const Expr& e, const std::string& var) {
  Expr slope = differentiate(e, var);
  if (slope.is_zero() || depends_on(slope, var)) return std::nullopt;
  Expr intercept = expand(e - slope * Expr::variable(var));
  if (depends_on(intercept, var)) {
    try {
      intercept = substitute(e, var, Expr(0));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::make_pair(slope, intercept);
}

namespace {

std::vector<Expr> factors_of(const Expr& t) {
  if (t.kind() == Kind::Mul) return {t.args().begin(), t.args().end()};
  return {t};
}

// u = k*var^p with k free of var and p constant: returns {k, p}.
std::optional<std::pair<Expr, Expr>> monomial_parts(const Expr& u, const std::string& var) {
  std::vector<Expr> k;
  std::optional<Expr> p;
  for (const auto& f : factors_of(u)) {
    if (!depends_on(f, var)) {
      k.push_back(f);
    } else if (p) {
      return std::nullopt;
    } else if (f.is_symbol(var)) {
      p = Expr(1);
    } else if (f.kind() == Kind::Pow && f.args()[0].is_symbol(var) && !depends_on(f.args()[1], var)) {
      p = f.args()[1];
    } else {
      return std::nullopt;
    }
  }
  if (!p) return std::nullopt;
  return std::make_pair(mul(k), *p);
}

struct Accumulator {
  std::vector<Expr> constant;
  std::vector<Expr> linear;
  int nonlinear = 0;
  ShapeFamily family = ShapeFamily::None;
  std::map<std::string, Expr> coeffs;
};

bool absorb_term(const Expr& t, const std::string& var, Accumulator& acc) {
  if (!depends_on(t, var)) {
    acc.constant.push_back(t);
    return true;
  }
  std::vector<Expr> coef_factors;
  std::vector<Expr> dep;
  for (const auto& f : factors_of(t)) (depends_on(f, var) ? dep : coef_factors).push_back(f);
  Expr coef = mul(coef_factors);
  const Expr y = Expr::variable(var);

  auto take_nonlinear = [&](ShapeFamily fam, std::map<std::string, Expr> c) {
    ++acc.nonlinear;
    acc.family = fam;
    acc.coeffs = std::move(c);
    return acc.nonlinear == 1;
  };

  if (dep.size() == 1) {
    const Expr& d = dep[0];
    if (d.is_symbol(var)) {
      acc.linear.push_back(coef);
      return true;
    }
    if (d.kind() == Kind::Pow && !depends_on(d.args()[1], var)) {
      auto ab = affine_parts(d.args()[0], var);
      if (!ab) return false;
      const Expr& n = d.args()[1];
      ShapeFamily fam = (n == Expr(2)) ? ShapeFamily::Quadratic : ShapeFamily::Power;
      return take_nonlinear(fam, {{"r", coef}, {"a", ab->first}, {"b", ab->second}, {"n", n}});
    }
    if (d.kind() == Kind::Exp) {
      auto ab = affine_parts(d.args()[0], var);
      if (!ab) return false;
      return take_nonlinear(ShapeFamily::Exponential, {{"r", coef * exp(ab->second)}, {"a", ab->first}});
    }
    if (d.kind() == Kind::Ln) {
      auto kp = monomial_parts(d.args()[0], var);
      if (!kp) return false;
      acc.constant.push_back(coef * ln(kp->first));
      return take_nonlinear(ShapeFamily::Log, {{"a", coef * kp->second}});
    }
    return false;
  }
  if (dep.size() == 2) {
    const Expr* lnf = nullptr;
    bool has_y = false;
    for (const auto& d : dep) {
      if (d.is_symbol(var)) has_y = true;
      if (d.kind() == Kind::Ln) lnf = &d;
    }
    if (!has_y || !lnf) return false;
    auto kp = monomial_parts(lnf->args()[0], var);
    if (!kp) return false;
    acc.linear.push_back(coef * ln(kp->first));
    return take_nonlinear(ShapeFamily::YLog, {{"a", coef * kp->second}});
  }
  return false;
}

std::optional<ShapeReport> try_match(const Expr& F, const std::string& var) {
  Accumulator acc;
  std::vector<Expr> terms = F.kind() == Kind::Add ? std::vector<Expr>(F.args().begin(), F.args().end()) : std::vector<Expr>{F};
  for (const auto& t : terms) {
    if (!absorb_term(t, var, acc)) return std::nullopt;
  }
  Expr lin = add(acc.linear);
  Expr con = add(acc.constant);
  ShapeReport out;
  if (acc.nonlinear == 0) {
    out.family = ShapeFamily::Linear;
    out.coeffs = {{"c", lin}, {"b", con}};
    return out;
  }
  out.family = acc.family;
  out.coeffs = acc.coeffs;
  switch (acc.family) {
    case ShapeFamily::Power:
    case ShapeFamily::Quadratic:
      out.coeffs["c"] = lin;
      out.coeffs["s"] = con;
      break;
    default:
      out.coeffs["b"] = lin;
      out.coeffs["c"] = con;
      break;
  }
  return out;
}

}  // namespace

ShapeReport match_shape(const Expr& F, const std::string& var) {
  if (auto r = try_match(F, var)) return *r;
  Expr expanded = expand(F);
  if (expanded != F) {
    if (auto r = try_match(expanded, var)) return *r;
  }
  ShapeReport none;
  none.diagnostic = "F matches none of the shapes r(ay+b)^n+cy+s, r*exp(ay)+by+c, a*ln(y)+by+c, a*y*ln(y)+by+c";
  return none;
}

Expr reconstruct(const ShapeReport& rep, const std::string& var) {
  const Expr y = Expr::variable(var);
  auto k = [&](const char* name) { return rep.at(name); };
  switch (rep.family) {
    case ShapeFamily::Power:
    case ShapeFamily::Quadratic:
      return k("r") * pow(k("a") * y + k("b"), k("n")) + k("c") * y + k("s");
    case ShapeFamily::Exponential:
      return k("r") * exp(k("a") * y) + k("b") * y + k("c");
    case ShapeFamily::Log:
      return k("a") * ln(y) + k("b") * y + k("c");
    case ShapeFamily::YLog:
      return k("a") * y * ln(y) + k("b") * y + k("c");
    case ShapeFamily::Linear:
      return k("c") * y + k("b");
    case ShapeFamily::None:
      break;
  }
  throw std::invalid_argument("no shape to reconstruct");
}

AFamily match_a_family(const Expr& A, const std::string& var) {
  AFamily out;
  if (!depends_on(A, var)) {
    out.shape = AShape::Constant;
    out.M = A;
    return out;
  }
  if (auto ab = affine_parts(A, var)) {
    out.shape = AShape::Affine;
    out.slope = ab->first;
    out.m = ab->second;
    return out;
  }
  std::vector<Expr> coef;
  std::vector<Expr> dep;
  for (const auto& f : factors_of(A)) (depends_on(f, var) ? dep : coef).push_back(f);
  if (dep.size() != 1) return out;
  const Expr c = mul(coef);
  const Expr& d = dep[0];
  if (d.kind() == Kind::Pow && d.args()[1] == Expr(-1)) {
    if (auto ab = affine_parts(d.args()[0], var)) {
      out.shape = AShape::Reciprocal;
      out.M = c / ab->first;
      out.m = ab->second / ab->first;
      return out;
    }
  }
  if (d.kind() == Kind::Tan) {
    if (auto ab = affine_parts(d.args()[0], var)) {
      out.shape = AShape::Tan;
      out.C = c;
      out.a = ab->first;
      out.b = ab->second;
      return out;
    }
  }
  return out;
}

}  // namespace lieclass
