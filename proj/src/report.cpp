#include "lieclass/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lieclass/parse.hpp"

namespace lieclass {

using nlohmann::ordered_json;

std::pair<std::string, ParamDecl> parse_param(const std::string& flag) {
  auto eq = flag.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == flag.size()) {
    throw InputError("--param expects name=value|nonzero|zero, got '" + flag + "'");
  }
  std::string name = flag.substr(0, eq);
  std::string rhs = flag.substr(eq + 1);
  ParamDecl d;
  if (rhs == "nonzero") {
    d.kind = ParamDecl::Kind::NonZero;
  } else if (rhs == "zero") {
    d.kind = ParamDecl::Kind::Zero;
  } else {
    try {
      d.kind = ParamDecl::Kind::Value;
      d.value = Rational::parse(rhs);
    } catch (const std::exception& e) {
      throw InputError("--param " + name + ": '" + rhs + "' is not a rational number, nonzero or zero");
    }
  }
  return {name, d};
}

Expr prepare_expr(const std::string& text, const std::string& what, const ParamDecls& params) {
  Expr e;
  try {
    e = parse(text);
  } catch (const ParseError& err) {
    throw InputError(what + ": " + err.what() + " at position " + std::to_string(err.position()) + " in '" + text + "'");
  }
  std::map<std::string, Expr> repl;
  std::string undeclared;
  for (const auto& name : free_parameters(e)) {
    auto it = params.find(name);
    if (it == params.end()) {
      undeclared += (undeclared.empty() ? "" : ", ") + name;
      continue;
    }
    if (it->second.kind == ParamDecl::Kind::Value) repl[name] = Expr(it->second.value);
    if (it->second.kind == ParamDecl::Kind::Zero) repl[name] = Expr(0);
  }
  if (!undeclared.empty()) {
    throw InputError(what + ": undeclared parameters " + undeclared + " (use --param name=value|nonzero|zero)");
  }
  return repl.empty() ? e : substitute(e, repl);
}

double generator_residual(const VectorField& v, const Expr& A, const Expr& F, const Bindings& samples,
                          const SampleGrid& grid) {
  auto sys = build_determining_system(A, F, v);
  try {
    return residual_max({sys.residuals.begin(), sys.residuals.end()}, grid, samples);
  } catch (const DegenerateDomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

FlowSummary flow_summary(const VectorField& v, const Expr& A, const Expr& F, const Bindings& samples, int curves) {
  static const double starts[] = {1.0, 0.5, 1.5, 0.25, -0.5, 2.0};
  static const double data[][2] = {{1.0, 0.3}, {1.5, -0.2}, {0.8, 0.5}, {1.2, 0.0}, {2.0, -0.4}};
  FlowSummary out;
  for (int c = 0; c < curves; ++c) {
    const auto& ic = data[c % 5];
    std::optional<SolutionCurve> curve;
    for (double x0 : starts) {
      try {
        curve = integrate_ode(A, F, x0, ic[0], ic[1], 1e-3, 400, samples);
        break;
      } catch (const std::exception&) {
      }
    }
    if (!curve) {
      out.conclusive = false;
      out.note = "no solution curve could be integrated";
      continue;
    }
    auto r = flow_transport_check(v, A, F, kFlowEpsilon, *curve, samples);
    ++out.curves;
    if (!r.conclusive) {
      out.conclusive = false;
      out.note = r.note;
      continue;
    }
    out.defect = std::max(out.defect, r.defect);
  }
  return out;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Definite: return "DEFINITE";
    case Outcome::Conditional: return "CONDITIONAL";
    case Outcome::Indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

int exit_code(Outcome o) { return o == Outcome::Definite ? 0 : 2; }

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

ordered_json params_json(const ParamDecls& params) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, d] : params) {
    switch (d.kind) {
      case ParamDecl::Kind::Value: j[name] = d.value.to_string(); break;
      case ParamDecl::Kind::NonZero: j[name] = "nonzero"; break;
      case ParamDecl::Kind::Zero: j[name] = "zero"; break;
    }
  }
  return j;
}

ordered_json flow_json(const FlowSummary& f) {
  ordered_json j;
  j["conclusive"] = f.conclusive;
  j["defect"] = f.defect;
  j["curves"] = f.curves;
  j["passed"] = f.conclusive && f.defect < kFlowThreshold;
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

Bindings declared_values(const ParamDecls& params) {
  Bindings b;
  for (const auto& [name, d] : params) {
    if (d.kind == ParamDecl::Kind::Value) b[name] = d.value.to_double();
  }
  return b;
}

}  // namespace

Report classify_report(const std::string& A_text, const std::string& F_text, const ParamDecls& params,
                       const ReportOptions& options) {
  Expr A = prepare_expr(A_text, "A", params);
  Expr F = prepare_expr(F_text, "F", params);
  ClassifyOptions copt;
  copt.grid.seed = options.seed;
  copt.samples = declared_values(params);
  ClassificationResult r;
  try {
    r = classify(A, F, copt);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  } catch (const AmbiguousParameterError& e) {
    throw InputError(e.what());
  }
  Bindings samples = sample_values({A, F}, copt.samples);

  Report rep;
  if (r.dimension.kind == Dimension::Kind::Exact) {
    rep.outcome = Outcome::Definite;
  } else {
    rep.outcome = r.dimension.estimate ? Outcome::Conditional : Outcome::Indeterminate;
  }

  ordered_json j;
  j["input"] = {{"A", A_text}, {"F", F_text}, {"params", params_json(params)}};
  j["seed"] = options.seed;
  const CanonicalF& c = r.canonical;
  ordered_json cj;
  cj["tag"] = to_string(c.tag);
  cj["form"] = c.canonical.str();
  cj["mu"] = c.mu.str();
  cj["lambda"] = c.lambda.str();
  cj["theta"] = c.theta.str();
  cj["n"] = c.n.str();
  cj["witness"] = {{"k3", c.witness.k3.str()}, {"k4", c.witness.k4.str()}};
  if (!c.diagnostic.empty()) cj["diagnostic"] = c.diagnostic;
  j["canonical"] = cj;
  j["case"] = r.case_label;
  ordered_json dj;
  dj["kind"] = r.dimension.kind == Dimension::Kind::Exact ? "exact" : "conditional";
  dj["value"] = r.dimension.value;
  dj["estimate"] = r.dimension.estimate ? ordered_json(*r.dimension.estimate) : ordered_json(nullptr);
  dj["text"] = r.dimension.str();
  j["dimension"] = dj;

  std::vector<std::string> notes = r.notes;
  ordered_json gens = ordered_json::array();
  std::ostringstream gtext;
  double worst = 0;
  for (std::size_t i = 0; i < r.generators.size(); ++i) {
    const auto& g = r.generators[i];
    ordered_json gj;
    gj["text"] = g.str();
    gj["xi"] = g.xi.str();
    gj["phi"] = g.phi.str();
    gtext << "  V" << i + 1 << " = " << g.str();
    if (options.verify) {
      double res = generator_residual(g, A, F, samples, copt.grid);
      worst = std::max(worst, res);
      gj["residual"] = res;
      gtext << "    residual " << sci(res);
      if (options.flow) {
        auto f = flow_summary(g, A, F, samples);
        gj["flow"] = flow_json(f);
        gtext << ", flow defect " << sci(f.defect) << (f.conclusive ? "" : " (inconclusive)");
      }
    }
    gtext << "\n";
    gens.push_back(gj);
  }
  j["generators"] = gens;
  j["general"] = r.general ? ordered_json(r.general->str()) : ordered_json(nullptr);

  ordered_json conds = ordered_json::array();
  std::ostringstream ctext;
  for (const auto& cr : r.conditions) {
    ordered_json cj2;
    cj2["name"] = cr.name;
    cj2["expression"] = cr.expression;
    cj2["verdict"] = cr.verdict ? ordered_json(to_string(*cr.verdict)) : ordered_json(nullptr);
    cj2["residual"] = cr.residual;
    if (!cr.note.empty()) cj2["note"] = cr.note;
    conds.push_back(cj2);
    ctext << "  " << cr.name << ": " << cr.expression;
    if (cr.verdict) ctext << "  [" << to_string(*cr.verdict) << ", residual " << sci(cr.residual) << "]";
    if (!cr.note.empty()) ctext << "  (" << cr.note << ")";
    ctext << "\n";
  }
  j["conditions"] = conds;
  j["reasoning"] = r.reasoning;

  if (options.verify) {
    bool ok = worst < kGeneratorTolerance;
    if (!ok && rep.outcome == Outcome::Definite) {
      rep.outcome = Outcome::Indeterminate;
      notes.push_back("a generator failed the determining-equation check; verdict withdrawn");
    }
    j["verification"] = {{"generator_residual_max", worst}, {"passed", ok}};
    rep.passed = ok;
  } else {
    j["verification"] = nullptr;
  }
  j["notes"] = notes;
  j["verdict"] = to_string(rep.outcome);
  rep.json = j;

  std::ostringstream t;
  t << "equation   y'' = A(x)*y' + F(y)\n";
  t << "A          " << A << "\n";
  t << "F          " << F << "\n";
  t << "canonical  " << to_string(c.tag) << ": " << c.canonical;
  if (!c.witness.is_identity()) t << "   via y = " << c.witness.k3 << "*w + " << c.witness.k4;
  t << "\n";
  t << "case       " << r.case_label << "\n";
  t << "dimension  " << r.dimension.str() << "\n";
  if (!r.reasoning.empty()) t << "reason     " << r.reasoning << "\n";
  if (!r.generators.empty()) t << "generators\n" << gtext.str();
  if (r.general && r.generators.size() > 1) t << "general    " << r.general->str() << "\n";
  if (!r.conditions.empty()) t << "conditions\n" << ctext.str();
  for (const auto& n : notes) t << "note       " << n << "\n";
  t << "verdict    " << to_string(rep.outcome) << "\n";
  rep.text = t.str();
  return rep;
}

Report verify_report(const std::string& A_text, const std::string& F_text, const std::string& xi_text,
                     const std::string& phi_text, const ParamDecls& params, const ReportOptions& options) {
  Expr A = prepare_expr(A_text, "A", params);
  Expr F = prepare_expr(F_text, "F", params);
  VectorField v{prepare_expr(xi_text, "xi", params), prepare_expr(phi_text, "phi", params)};
  Bindings samples = sample_values({A, F, v.xi, v.phi}, declared_values(params));
  SampleGrid grid = SampleGrid::standard();
  grid.seed = options.seed;

  Report rep;
  double res = generator_residual(v, A, F, samples, grid);
  bool pass = res < kGeneratorTolerance;
  ordered_json j;
  j["input"] = {{"A", A_text}, {"F", F_text}, {"xi", xi_text}, {"phi", phi_text}, {"params", params_json(params)}};
  j["seed"] = options.seed;
  j["generator"] = v.str();
  j["symmetry_residual"] = symmetry_residual(v, A, F).str();
  j["residual"] = res;
  std::ostringstream t;
  t << "generator  " << v.str() << "\n";
  t << "residual   " << sci(res) << (res < kGeneratorTolerance ? "  PASS" : "  FAIL") << "\n";
  if (options.flow) {
    auto f = flow_summary(v, A, F, samples);
    bool fpass = f.conclusive && f.defect < kFlowThreshold;
    pass = pass && fpass;
    j["flow"] = flow_json(f);
    t << "flow       defect " << sci(f.defect) << " over " << f.curves << " curves"
      << (f.conclusive ? "" : " (inconclusive: " + f.note + ")") << (fpass ? "  PASS" : "  FAIL") << "\n";
  }
  j["passed"] = pass;
  t << "result     " << (pass ? "PASS" : "FAIL") << "\n";
  rep.json = j;
  rep.text = t.str();
  rep.passed = pass;
  rep.outcome = pass ? Outcome::Definite : Outcome::Indeterminate;
  return rep;
}

}  // namespace lieclass
