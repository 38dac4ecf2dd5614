#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lieclass/classifier.hpp"

namespace lieclass {

struct TableInstance {
  std::string A;
  std::string F;
  // Generator printed in the table, one field per free constant.
  std::vector<std::pair<std::string, std::string>> fields;
};

struct TableRow {
  std::string key;      // filter key for --row, e.g. "y^-1"
  std::string F_label;
  std::string A_label;
  int dim = 0;
  std::vector<TableInstance> instances;
};

const std::vector<TableRow>& table_rows();

struct TableCheck {
  const TableRow* row = nullptr;
  const TableInstance* instance = nullptr;
  ClassificationResult result;
  bool dimension_ok = false;
  double residual = 0.0;  // worst generator residual
  bool span_ok = true;    // the table's generator lies in the span of ours
  bool pass = false;
  std::string message;
};

TableCheck check_instance(const TableRow& row, const TableInstance& instance, const SampleGrid& grid);

// True when every field of `table` is a constant combination of `ours`
// (least squares on sample points, relative residual below 1e-8).
bool spans_contain(const std::vector<VectorField>& ours, const std::vector<VectorField>& table, const Bindings& samples);

}  // namespace lieclass
