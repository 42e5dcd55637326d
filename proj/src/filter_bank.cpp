#include "ssrf/filter_bank.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ssrf {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

bool has_whitespace(const std::string& s) {
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c))) return true;
  return false;
}

}  // namespace

FilterBank parse_bank(const std::string& text, const std::string& source_name) {
  const std::vector<std::string> lines = split_lines(text);
  std::size_t pos = 0;
  const auto next_line = [&]() -> const std::string& {
    if (pos >= lines.size())
      throw ParseError(static_cast<int>(lines.size()) + 1, "unexpected end of file");
    return lines[pos++];
  };

  {
    std::istringstream header(next_line());
    std::string magic, extra;
    int version = 0;
    if (!(header >> magic >> version) || magic != "mkf" || version != 1 || (header >> extra))
      throw ParseError(1, "expected header 'mkf 1'");
  }

  long count = -1, rows = 0, cols = 0;
  {
    std::istringstream dims(next_line());
    std::string extra;
    if (!(dims >> count >> rows >> cols) || count < 0 || rows < 1 || cols < 1 || (dims >> extra))
      throw ParseError(2, "expected '<count> <rows> <cols>'");
    if (rows % 2 == 0 || cols % 2 == 0)
      throw ParseError(2, "dimension error: grid dimensions must be odd, got " +
                              std::to_string(rows) + "x" + std::to_string(cols));
  }
  const int radius_x = static_cast<int>(cols) / 2;
  const int radius_y = static_cast<int>(rows) / 2;

  FilterBank bank;
  bank.source = source_name;
  std::set<std::string> seen;
  for (long k = 0; k < count; ++k) {
    const int name_line = static_cast<int>(pos) + 1;
    const std::string& name = next_line();
    if (name.empty() || has_whitespace(name))
      throw ParseError(name_line, "filter name must be a single non-empty token");
    if (!seen.insert(name).second)
      throw ParseError(name_line, "duplicate filter name '" + name + "'");

    FilterGrid grid(radius_x, radius_y);
    for (long r = 0; r < rows; ++r) {
      const int line_no = static_cast<int>(pos) + 1;
      std::istringstream row(next_line());
      std::string token;
      for (long c = 0; c < cols; ++c) {
        if (!(row >> token))
          throw ParseError(line_no, "dimension error: expected " + std::to_string(cols) +
                                        " values in row " + std::to_string(r) + " of filter '" +
                                        name + "'");
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0')
          throw ParseError(line_no, "malformed number '" + token + "' in filter '" + name + "'");
        if (!std::isfinite(v))
          throw ParseError(line_no, "non-finite value in filter '" + name + "'");
        grid.at(static_cast<int>(c) - radius_x, radius_y - static_cast<int>(r)) = v;
      }
      if (row >> token)
        throw ParseError(line_no, "dimension error: trailing data in row " + std::to_string(r) +
                                      " of filter '" + name + "'");
    }
    bank.entries.push_back({name, std::move(grid)});
  }

  while (pos < lines.size()) {
    if (!blank(lines[pos]))
      throw ParseError(static_cast<int>(pos) + 1, "trailing content after last filter");
    ++pos;
  }
  return bank;
}

FilterBank load_bank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open bank file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bank(buf.str(), path);
}

std::string format_bank(const FilterBank& bank) {
  int rows = 1, cols = 1;
  if (!bank.entries.empty()) {
    rows = bank.entries.front().grid.rows();
    cols = bank.entries.front().grid.cols();
  }
  for (const auto& e : bank.entries) {
    if (e.grid.rows() != rows || e.grid.cols() != cols)
      throw std::invalid_argument("format_bank: all grids must share support dimensions");
    if (e.name.empty() || has_whitespace(e.name))
      throw std::invalid_argument("format_bank: invalid filter name '" + e.name + "'");
  }

  std::string out = "mkf 1\n" + std::to_string(bank.entries.size()) + " " +
                    std::to_string(rows) + " " + std::to_string(cols) + "\n";
  char buf[64];
  for (const auto& e : bank.entries) {
    out += e.name;
    out += '\n';
    const FilterGrid& g = e.grid;
    for (int y = g.radius_y(); y >= -g.radius_y(); --y) {
      for (int x = -g.radius_x(); x <= g.radius_x(); ++x) {
        std::snprintf(buf, sizeof(buf), "%.17g", g.at(x, y));
        if (x > -g.radius_x()) out += ' ';
        out += buf;
      }
      out += '\n';
    }
  }
  return out;
}

void save_bank(const FilterBank& bank, const std::string& path) {
  const std::string text = format_bank(bank);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ssrf
