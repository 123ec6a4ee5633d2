#include "report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "lriga/errors.hpp"

namespace lriga::cli {

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "command",         "geometry",        "level",           "dofs_per_dim",     "total_dofs",
      "tol",             "assembly_seconds", "rank_omega",     "rank_q11",         "rank_q12",
      "rank_q13",        "rank_q22",        "rank_q23",        "rank_q33",         "mass_terms",
      "stiffness_terms", "diff_mass",       "diff_stiffness",  "lowrank_storage",  "dense_nnz",
      "beta",            "time_steps",      "solve_seconds",   "sweeps",           "solution_max_rank",
      "objective",       "control_norm",    "residual",        "status"};
  return cols;
}

namespace {

void check_column(std::string_view column) {
  const auto& cols = report_columns();
  if (std::find(cols.begin(), cols.end(), column) == cols.end()) {
    throw ValidationError("report: unknown column '" + std::string(column) + "'");
  }
}

}  // namespace

void ReportRow::set(std::string_view column, double value) {
  check_column(column);
  if (!std::isfinite(value)) throw ValidationError("report: non-finite value in column '" + std::string(column) + "'");
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  cells_[std::string(column)] = std::string(buf.data(), res.ptr);
}

void ReportRow::set(std::string_view column, long long value) {
  check_column(column);
  cells_[std::string(column)] = std::to_string(value);
}

void ReportRow::set(std::string_view column, std::string value) {
  check_column(column);
  cells_[std::string(column)] = std::move(value);
}

const std::string& ReportRow::get(std::string_view column) const {
  static const std::string empty;
  const auto it = cells_.find(column);
  return it == cells_.end() ? empty : it->second;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void RunReport::write_csv(std::ostream& out) const {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(row.get(cols[i]));
    out << "\r\n";
  }
}

void RunReport::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("report: cannot open " + path + " for writing");
  write_csv(out);
}

}  // namespace lriga::cli
