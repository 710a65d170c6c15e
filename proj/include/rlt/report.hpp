#pragma once

#include "rlt/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace rlt {

enum class Format { Jsonl, Csv };

/// Collects report records. JSON lines are written as they arrive; CSV is
/// written on finish() with the union of record keys as columns.
class Reporter {
 public:
  Reporter(std::ostream &out, Format f) : out_(out), format_(f) {}

  /// `op` names the module operation behind the record's numbers.
  void emit(const std::string &op, json fields, std::optional<size_t> index = {});
  void finish();

 private:
  std::ostream &out_;
  Format format_;
  std::vector<json> rows_;
};

std::string csv_cell(const json &v);

}  // namespace rlt
