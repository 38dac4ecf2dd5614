#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lieclass/detsys.hpp"
#include "lieclass/equivalence.hpp"

namespace lieclass {

struct Dimension {
  enum class Kind { Exact, Bound, Conditional };
  Kind kind = Kind::Exact;
  int value = 0;                // exact value, or the upper bound
  std::optional<int> estimate;  // numerical estimate for conditional results

  static Dimension exact(int k) { return {Kind::Exact, k, std::nullopt}; }
  static Dimension conditional(int bound, std::optional<int> estimate) { return {Kind::Conditional, bound, estimate}; }
  [[nodiscard]] bool definite() const { return kind == Kind::Exact; }
  [[nodiscard]] std::string str() const;
};

struct ConditionReport {
  std::string name;
  std::string expression;
  std::optional<Verdict> verdict;  // absent for conditions recorded but not tested
  double residual = 0.0;
  std::string note;
};

struct ClassificationResult {
  CanonicalF canonical;
  std::string case_label;
  Dimension dimension;
  std::vector<VectorField> generators;            // in the original variables (x, y)
  std::vector<VectorField> canonical_generators;  // for (A, canonical F)
  std::optional<VectorField> general;             // k1*V1 + k2*V2 + ... over the basis above
  std::vector<ConditionReport> conditions;
  std::vector<std::string> notes;
  std::string reasoning;  // why an exact claim holds
};

struct ClassifyOptions {
  SampleGrid grid = SampleGrid::standard();
  Bindings samples;  // numeric stand-ins for symbolic parameters in numerical tests
};

// Numeric stand-ins for the parameters of `exprs`, keeping the ones given.
Bindings sample_values(const std::vector<Expr>& exprs, const Bindings& given = {});

ClassificationResult classify(const Expr& A, const Expr& F, const ClassifyOptions& options = {});

// Branches, acting on A and the canonical data. Generators are in the
// canonical variables.
ClassificationResult linear_case(const Expr& A, const CanonicalF& c, const ClassifyOptions& options);
ClassificationResult quadratic_case(const Expr& A, const CanonicalF& c, const ClassifyOptions& options);
ClassificationResult case_exp(const Expr& A, const CanonicalF& c, const ClassifyOptions& options);
ClassificationResult case_log(const Expr& A, const CanonicalF& c, const ClassifyOptions& options);
ClassificationResult case_ylogy(const Expr& A, const CanonicalF& c, const ClassifyOptions& options);
ClassificationResult case_power(const Expr& A, const CanonicalF& c, const ClassifyOptions& options);

// Maps a field for the canonical pair back through y = k3*w + k4.
VectorField pull_back(const VectorField& v, const EquivalenceMap& witness);

}  // namespace lieclass
