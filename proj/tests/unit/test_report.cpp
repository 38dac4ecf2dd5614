#include "doctest.h"

#include "lieclass/report.hpp"
#include "lieclass/table.hpp"

using namespace lieclass;

TEST_CASE("parameter declarations") {
  auto [n1, d1] = parse_param("M=3/2");
  CHECK(n1 == "M");
  CHECK(d1.kind == ParamDecl::Kind::Value);
  CHECK(d1.value == Rational(3, 2));
  CHECK(parse_param("mu=nonzero").second.kind == ParamDecl::Kind::NonZero);
  CHECK(parse_param("theta=zero").second.kind == ParamDecl::Kind::Zero);
  CHECK_THROWS_AS(parse_param("M"), InputError);
  CHECK_THROWS_AS(parse_param("M=abc"), InputError);
}

TEST_CASE("input preparation") {
  ParamDecls p;
  p["M"] = parse_param("M=3").second;
  p["theta"] = parse_param("theta=zero").second;
  p["mu"] = parse_param("mu=nonzero").second;
  CHECK(prepare_expr("M/x", "A", p).str() == "3/x");
  CHECK(prepare_expr("mu*exp(y) + theta", "F", p).str() == "mu*exp(y)");
  try {
    prepare_expr("a*x + b", "A", p);
    FAIL("undeclared parameters accepted");
  } catch (const InputError& e) {
    std::string msg = e.what();
    CHECK(msg.find("a, b") != std::string::npos);
  }
  try {
    prepare_expr("x +* 2", "A", p);
    FAIL("parse error not reported");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("classification reports") {
  ReportOptions opt;
  SUBCASE("definite") {
    auto r = classify_report("0", "y^(-3)", {}, opt);
    CHECK(r.outcome == Outcome::Definite);
    CHECK(exit_code(r.outcome) == 0);
    CHECK(r.json["dimension"]["value"] == 3);
    CHECK(r.json["generators"].size() == 3);
    for (const auto& g : r.json["generators"]) CHECK(g["residual"].get<double>() < 1e-8);
  }
  SUBCASE("conditional") {
    auto r = classify_report("x", "y^2+1", {}, opt);
    CHECK(exit_code(r.outcome) == 2);
    CHECK(r.json["dimension"]["kind"] == "conditional");
  }
  SUBCASE("symbolic parameters declared nonzero") {
    ParamDecls p;
    p["mu"] = parse_param("mu=nonzero").second;
    auto r = classify_report("0", "mu*exp(y)", p, opt);
    CHECK(r.outcome == Outcome::Definite);
    CHECK(r.json["dimension"]["value"] == 2);
  }
  SUBCASE("ambiguous zero status is an input error") {
    ParamDecls p;
    p["a"] = parse_param("a=nonzero").second;
    p["b"] = parse_param("b=nonzero").second;
    CHECK_THROWS_AS(classify_report("0", "y^3 + a + b", p, opt), InputError);
  }
}

TEST_CASE("JSON is deterministic and round-trips") {
  ReportOptions opt;
  opt.flow = true;
  auto a = classify_report("3/x", "exp(y)", {}, opt).json.dump(2);
  auto b = classify_report("3/x", "exp(y)", {}, opt).json.dump(2);
  CHECK(a == b);
  CHECK(nlohmann::ordered_json::parse(a).dump(2) == a);
}

TEST_CASE("verify reports") {
  ReportOptions opt;
  ParamDecls p;
  p["M"] = parse_param("M=2").second;
  CHECK(verify_report("M", "y*ln(y)", "1", "0", p, opt).passed);
  auto bad = verify_report("0", "y^2", "0", "1", {}, opt);
  CHECK_FALSE(bad.passed);
  CHECK(bad.json["residual"].get<double>() > 1);
  opt.flow = true;
  auto flow = verify_report("0", "y^(-3)", "2*x", "y", {}, opt);
  CHECK(flow.passed);
  CHECK(flow.json["flow"]["defect"].get<double>() < kFlowThreshold);
}

TEST_CASE("every table instance passes") {
  SampleGrid grid = SampleGrid::standard();
  for (const auto& row : table_rows()) {
    for (const auto& inst : row.instances) {
      auto c = check_instance(row, inst, grid);
      INFO(row.key << ": A = " << inst.A << ", F = " << inst.F << " -> " << c.message);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("span test rejects fields outside the algebra") {
  std::vector<VectorField> ours = {{Expr(1), Expr(0)}};
  std::vector<VectorField> other = {{Expr::variable("x"), Expr(0)}};
  CHECK_FALSE(spans_contain(ours, other, {}));
  CHECK(spans_contain(ours, {{Expr(3), Expr(0)}}, {}));
}
