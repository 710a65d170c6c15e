#include "rlt/report.hpp"

namespace rlt {

void Reporter::emit(const std::string &op, json fields, std::optional<size_t> index) {
  json rec;
  rec["op"] = op;
  if (index) rec["index"] = *index;
  for (auto &[k, v] : fields.items()) rec[k] = v;
  if (format_ == Format::Jsonl) {
    out_ << rec.dump() << '\n';
  } else {
    rows_.push_back(std::move(rec));
  }
}

std::string csv_cell(const json &v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void Reporter::finish() {
  if (format_ != Format::Csv) return;
  std::vector<std::string> cols;
  for (auto &r : rows_)
    for (auto &[k, v] : r.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  for (size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
  out_ << '\n';
  for (auto &r : rows_) {
    for (size_t i = 0; i < cols.size(); ++i) {
      if (i) out_ << ',';
      if (r.contains(cols[i])) out_ << csv_cell(r[cols[i]]);
    }
    out_ << '\n';
  }
  rows_.clear();
}

}  // namespace rlt
