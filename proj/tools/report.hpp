#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lriga::cli {

/// Fixed column order of every report.
const std::vector<std::string>& report_columns();

/// One CSV row; unset cells are written empty.
class ReportRow {
 public:
  void set(std::string_view column, double value);
  void set(std::string_view column, long long value);
  void set(std::string_view column, std::string value);

  [[nodiscard]] const std::string& get(std::string_view column) const;

 private:
  std::map<std::string, std::string, std::less<>> cells_;
};

struct RunReport {
  std::vector<ReportRow> rows;

  void write_csv(std::ostream& out) const;
  void write_csv(const std::string& path) const;
};

/// RFC-4180 field quoting: fields with commas, quotes or line breaks are quoted and quotes doubled.
std::string csv_field(std::string_view s);

}  // namespace lriga::cli
