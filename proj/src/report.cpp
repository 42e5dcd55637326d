#include "ssrf/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ssrf {

void ReportTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != headers.size())
    throw std::invalid_argument("table row width does not match header");
  rows.push_back(std::move(cells));
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s = buf;
  // canonicalize negative zero
  if (s[0] == '-' && s.find_first_not_of("0.", 1) == std::string::npos) s.erase(0, 1);
  return s;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const ReportTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(table.headers[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  }
}

void write_markdown(const ReportTable& table, std::ostream& out) {
  out << "### " << table.title << "\n\n";
  out << '|';
  for (const auto& h : table.headers) out << ' ' << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < table.headers.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& row : table.rows) {
    out << '|';
    for (const auto& cell : row) out << ' ' << cell << " |";
    out << '\n';
  }
  out << '\n';
}

std::string to_csv(const ReportTable& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

std::string to_markdown(const ReportTable& table) {
  std::ostringstream os;
  write_markdown(table, os);
  return os.str();
}

}  // namespace ssrf
