#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssrf {

/// Rectangular table of preformatted cells.  Numeric cells are formatted
/// once, when inserted, so CSV and Markdown emissions carry identical
/// numeric strings.
struct ReportTable {
  std::string title;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

/// Fixed-point formatting at the declared precision (the underlying
/// conversion rounds half to even on exact ties).
std::string fmt_fixed(double v, int decimals);

/// Shortest round-trip-exact representation (17 significant digits).
std::string fmt_full(double v);

void write_csv(const ReportTable& table, std::ostream& out);
void write_markdown(const ReportTable& table, std::ostream& out);

std::string to_csv(const ReportTable& table);
std::string to_markdown(const ReportTable& table);

}  // namespace ssrf
