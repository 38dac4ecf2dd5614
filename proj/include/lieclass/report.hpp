#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lieclass/classifier.hpp"
#include "lieclass/verifier.hpp"

namespace lieclass {

// Bad user input: parse errors, undeclared parameters, malformed flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamDecl {
  enum class Kind { Value, NonZero, Zero };
  Kind kind = Kind::NonZero;
  Rational value;
};

using ParamDecls = std::map<std::string, ParamDecl>;

// "name=value", "name=nonzero" or "name=zero".
std::pair<std::string, ParamDecl> parse_param(const std::string& flag);

// Parses `text`, substitutes declared values and zeros, and rejects parameters
// that were not declared at all.
Expr prepare_expr(const std::string& text, const std::string& what, const ParamDecls& params);

struct FlowSummary {
  bool conclusive = true;
  double defect = 0.0;  // worst over the curves
  int curves = 0;
  std::string note;
};

// Flow transport along `curves` solution curves with different initial data.
FlowSummary flow_summary(const VectorField& v, const Expr& A, const Expr& F, const Bindings& samples,
                         int curves = 3);

// residual_max of the determining system of v, or +inf if it cannot be sampled.
double generator_residual(const VectorField& v, const Expr& A, const Expr& F, const Bindings& samples,
                          const SampleGrid& grid);

constexpr double kGeneratorTolerance = 1e-8;

enum class Outcome { Definite, Conditional, Indeterminate };

const char* to_string(Outcome o);
int exit_code(Outcome o);

struct Report {
  nlohmann::ordered_json json;
  std::string text;
  Outcome outcome = Outcome::Indeterminate;
  bool passed = true;  // verify: residual (and flow) below threshold
};

struct ReportOptions {
  bool verify = true;
  bool flow = false;
  std::uint64_t seed = kDefaultSeed;
};

Report classify_report(const std::string& A, const std::string& F, const ParamDecls& params,
                       const ReportOptions& options);

Report verify_report(const std::string& A, const std::string& F, const std::string& xi, const std::string& phi,
                     const ParamDecls& params, const ReportOptions& options);

}  // namespace lieclass
