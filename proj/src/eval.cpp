#include "lieclass/eval.hpp"

#include <cmath>
#include <numbers>

namespace lieclass {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
}

double real_power(double base, double exponent, const Expr& exponent_expr, const EvalOptions& opt) {
  if (exponent < 0 && std::abs(base) < std::max(opt.pole_guard, 1e-300)) throw DomainError("pole of a negative power");
  if (base < 0) {
    if (exponent_expr.kind() == Kind::Constant) {
      const Rational& r = exponent_expr.value();
      if (r.den() % 2 == 0) throw DomainError("even root of a negative number");
      double magnitude = std::pow(-base, exponent);
      return (r.num() % 2 != 0) ? -magnitude : magnitude;
    }
    if (exponent != std::floor(exponent)) throw DomainError("non-integer power of a negative number");
  }
  return std::pow(base, exponent);
}

}  // namespace

struct IntegralEvaluator {
  const Bindings& bindings;
  const EvalOptions& options;
  EvalContext& context;

  double eval(const Expr& e) {
    switch (e.kind()) {
      case Kind::Constant:
        return e.value().to_double();
      case Kind::Named:
        return std::numbers::pi;
      case Kind::Symbol: {
        auto it = bindings.find(e.name());
        if (it == bindings.end()) throw UnboundSymbolError(e.name());
        return it->second;
      }
      case Kind::Function:
        throw UnboundSymbolError(e.name() + std::string(static_cast<std::size_t>(e.order()), '\'') + "(" +
                                 e.arg_var() + ")");
      case Kind::Integral:
        return integral(e);
      case Kind::Add: {
        double s = 0;
        for (const auto& a : e.args()) s += eval(a);
        return s;
      }
      case Kind::Mul: {
        double p = 1;
        for (const auto& a : e.args()) p *= eval(a);
        return p;
      }
      case Kind::Pow: {
        double b = eval(e.args()[0]);
        double x = eval(e.args()[1]);
        double v = real_power(b, x, e.args()[1], options);
        require_finite(v, "power");
        return v;
      }
      case Kind::Exp: {
        double v = std::exp(eval(e.args()[0]));
        require_finite(v, "exp");
        return v;
      }
      case Kind::Ln: {
        double a = eval(e.args()[0]);
        if (a <= 0 || a < options.pole_guard) throw DomainError("logarithm of a non-positive number");
        return std::log(a);
      }
      case Kind::Sin:
        return std::sin(eval(e.args()[0]));
      case Kind::Cos:
        return std::cos(eval(e.args()[0]));
      case Kind::Tan: {
        double a = eval(e.args()[0]);
        if (std::abs(std::cos(a)) < std::max(options.pole_guard, 1e-300)) throw DomainError("pole of tan");
        return std::tan(a);
      }
    }
    throw DomainError("unknown node");
  }

  double integral(const Expr& e) {
    const std::string& var = e.name();
    auto it = bindings.find(var);
    if (it == bindings.end()) throw UnboundSymbolError(var);
    const double x = it->second;
    const double x0 = e.value().to_double();
    const Expr& integrand = e.args()[0];

    auto& entry = context.table_[e.id()];
    if (entry.values.empty() && entry.others.empty()) {
      entry.node = e;
      for (const auto& s : free_symbols(integrand)) {
        if (s != var) entry.others.push_back(s);
      }
    }
    std::vector<double> key;
    key.reserve(entry.others.size());
    for (const auto& s : entry.others) {
      auto b = bindings.find(s);
      if (b == bindings.end()) throw UnboundSymbolError(s);
      key.push_back(b->second);
    }
    auto& known = entry.values[key];
    if (known.empty()) known.emplace(x0, 0.0);
    if (auto hit = known.find(x); hit != known.end()) return hit->second;

    // Start from the nearest point already integrated.
    auto up = known.lower_bound(x);
    auto start = up;
    if (up == known.end()) {
      start = std::prev(up);
    } else if (up != known.begin()) {
      auto down = std::prev(up);
      if (x - down->first < up->first - x) start = down;
    }
    Bindings local = bindings;
    auto f = [&](double t) {
      local[var] = t;
      IntegralEvaluator inner{local, options, context};
      double v = inner.eval(integrand);
      require_finite(v, "integrand");
      return v;
    };
    double value = start->second + integrate(f, start->first, x);
    require_finite(value, "antiderivative");
    known.emplace(x, value);
    return value;
  }

  template <typename Fn>
  double integrate(Fn& f, double a, double b) {
    if (a == b) return 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.25)));
    const double h = (b - a) / pieces;
    const double tol = options.quadrature_tolerance / pieces;
    double total = 0;
    for (int i = 0; i < pieces; ++i) {
      const double lo = a + i * h;
      const double hi = (i + 1 == pieces) ? b : lo + h;
      const double flo = f(lo);
      const double fhi = f(hi);
      const double fmid = f(0.5 * (lo + hi));
      const double whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi);
      total += simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 0);
    }
    return total;
  }

  template <typename Fn>
  double simpson(Fn& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15 * std::max(tol, 1e-13 * std::abs(whole))) return left + right + delta / 15;
    if (depth >= 40) throw DomainError("quadrature did not converge");
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth + 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2, depth + 1);
  }
};

double evaluate(const Expr& e, const Bindings& bindings, const EvalOptions& options, EvalContext* context) {
  EvalContext local;
  IntegralEvaluator ev{bindings, options, context ? *context : local};
  double v = ev.eval(e);
  require_finite(v, "result");
  return v;
}

}  // namespace lieclass
