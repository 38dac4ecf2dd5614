#include "lieclass/equivalence.hpp"

#include <stdexcept>

namespace lieclass {

void EquivalenceMap::validate() const {
  if (!is_nonzero(k1) || !is_nonzero(k3)) {
    throw std::invalid_argument("equivalence map needs k1*k3 != 0");
  }
}

bool EquivalenceMap::is_identity() const { return k1.is_one() && k2.is_zero() && k3.is_one() && k4.is_zero(); }

std::pair<Expr, Expr> act_on_coefficients(const Expr& A, const Expr& F, const EquivalenceMap& g, const std::string& x,
                                          const std::string& y, const std::string& z, const std::string& w) {
  g.validate();
  Expr B = g.k1 * substitute(A, x, g.k1 * Expr::variable(z) + g.k2);
  Expr H = pow(g.k1, Expr(2)) / g.k3 * substitute(F, y, g.k3 * Expr::variable(w) + g.k4);
  return {B, H};
}

EquivalenceMap invert(const EquivalenceMap& g) {
  g.validate();
  EquivalenceMap out;
  out.k1 = Expr(1) / g.k1;
  out.k2 = -g.k2 / g.k1;
  out.k3 = Expr(1) / g.k3;
  out.k4 = -g.k4 / g.k3;
  return out;
}

EquivalenceMap compose(const EquivalenceMap& first, const EquivalenceMap& second) {
  EquivalenceMap out;
  out.k1 = first.k1 * second.k1;
  out.k2 = first.k1 * second.k2 + first.k2;
  out.k3 = first.k3 * second.k3;
  out.k4 = first.k3 * second.k4 + first.k4;
  return out;
}

const char* to_string(CanonicalTag t) {
  switch (t) {
    case CanonicalTag::Linear: return "Linear";
    case CanonicalTag::ExpPlusLinear: return "ExpPlusLinear";
    case CanonicalTag::ExpPlusConst: return "ExpPlusConst";
    case CanonicalTag::LogPlusLinear: return "LogPlusLinear";
    case CanonicalTag::YLogYPlusConst: return "YLogYPlusConst";
    case CanonicalTag::PowerPlusLinear: return "PowerPlusLinear";
    case CanonicalTag::QuadraticPlusConst: return "QuadraticPlusConst";
    case CanonicalTag::Generic: return "Generic";
  }
  return "Generic";
}

namespace {

EquivalenceMap y_map(const Expr& k3, const Expr& k4) {
  EquivalenceMap g;
  g.k3 = k3;
  g.k4 = k4;
  return g;
}

// True when base^(1/(1-n)) would need an even root of a negative number.
bool needs_complex_root(const Expr& base, const Expr& n) {
  if (!base.is_constant() || !n.is_constant()) return false;
  if (!base.value().is_negative()) return false;
  Rational e = Rational(1) / (Rational(1) - n.value());
  return e.den() % 2 == 0;
}

}  // namespace

CanonicalF canonicalize_F(const Expr& F, const std::string& yname) {
  CanonicalF out;
  out.shape = match_shape(F, yname);
  const ShapeReport& s = out.shape;
  const Expr y = Expr::variable(yname);
  auto k = [&](const char* name) { return s.at(name); };

  switch (s.family) {
    case ShapeFamily::Power: {
      Expr lead = k("r") * pow(k("a"), k("n"));
      if (needs_complex_root(lead, k("n"))) {
        out.tag = CanonicalTag::Generic;
        out.diagnostic = "r*a^n = " + lead.str() + " < 0 would need a complex scaling k3; kept as generic";
        out.canonical = F;
        return out;
      }
      Expr k3 = pow(lead, Expr(1) / (Expr(1) - k("n")));
      Expr k4 = -k("b") / k("a");
      out.tag = CanonicalTag::PowerPlusLinear;
      out.n = k("n");
      out.lambda = k("c");
      out.theta = (k("s") - k("b") * k("c") / k("a")) / k3;
      out.witness = y_map(k3, k4);
      out.canonical = pow(y, out.n) + out.lambda * y + out.theta;
      return out;
    }
    case ShapeFamily::Quadratic: {
      Expr A2 = k("r") * pow(k("a"), Expr(2));
      Expr B2 = Expr(2) * k("r") * k("a") * k("b") + k("c");
      Expr C2 = k("r") * pow(k("b"), Expr(2)) + k("s");
      out.tag = CanonicalTag::QuadraticPlusConst;
      out.n = Expr(2);
      out.theta = expand((Expr(4) * A2 * C2 - pow(B2, Expr(2))) / Expr(4));
      out.witness = y_map(Expr(1) / A2, -B2 / (Expr(2) * A2));
      out.canonical = pow(y, Expr(2)) + out.theta;
      return out;
    }
    case ShapeFamily::Exponential: {
      const Expr& r = k("r");
      const Expr& a = k("a");
      const Expr& b = k("b");
      const Expr& c = k("c");
      if (is_nonzero(b)) {
        Expr k4 = -c / b;
        out.tag = CanonicalTag::ExpPlusLinear;
        out.mu = r * a * exp(a * k4);
        out.lambda = b;
        out.witness = y_map(Expr(1) / a, k4);
        out.canonical = out.mu * exp(y) + out.lambda * y;
      } else {
        out.tag = CanonicalTag::ExpPlusConst;
        out.mu = r * a;
        out.theta = c * a;
        out.witness = y_map(Expr(1) / a, Expr(0));
        out.canonical = out.mu * exp(y) + out.theta;
      }
      return out;
    }
    case ShapeFamily::Log: {
      const Expr& a = k("a");
      out.tag = CanonicalTag::LogPlusLinear;
      out.mu = a * exp(k("c") / a);
      out.lambda = k("b");
      out.witness = y_map(exp(-k("c") / a), Expr(0));
      out.canonical = out.mu * ln(y) + out.lambda * y;
      return out;
    }
    case ShapeFamily::YLog: {
      const Expr& a = k("a");
      out.tag = CanonicalTag::YLogYPlusConst;
      out.mu = a;
      out.theta = k("c") * exp(k("b") / a);
      out.witness = y_map(exp(-k("b") / a), Expr(0));
      out.canonical = out.mu * y * ln(y) + out.theta;
      return out;
    }
    case ShapeFamily::Linear: {
      const Expr& c = k("c");
      const Expr& b = k("b");
      out.tag = CanonicalTag::Linear;
      if (is_nonzero(c)) {
        out.lambda = c;
        out.mu = c;
        out.witness = y_map(Expr(1), -b / c);
      } else if (is_nonzero(b)) {
        out.lambda = Expr(0);
        out.theta = Expr(1);
        out.witness = y_map(b, Expr(0));
      } else {
        out.lambda = Expr(0);
        out.theta = Expr(0);
      }
      out.canonical = out.lambda * y + out.theta;
      return out;
    }
    case ShapeFamily::None:
      break;
  }
  out.tag = CanonicalTag::Generic;
  out.diagnostic = s.diagnostic;
  out.canonical = F;
  return out;
}

LinearReduction reduce_linear_ode(const Expr& f, const Expr& g, const std::string& x) {
  LinearReduction out;
  out.h = -(pow(f, Expr(2)) - Expr(4) * g + Expr(2) * differentiate(f, x)) / Expr(4);
  out.gauge = exp(Expr(Rational(-1, 2)) * Expr::integral(f, x, Rational(0)));
  return out;
}

}  // namespace lieclass
