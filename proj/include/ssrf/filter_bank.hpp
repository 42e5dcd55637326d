#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ssrf/filter_grid.hpp"

namespace ssrf {

/// Error raised while reading an MKF file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Named, ordered collection of filters sharing one support.
struct FilterBank {
  struct Entry {
    std::string name;
    FilterGrid grid;
  };

  std::vector<Entry> entries;
  std::string source = "generated";

  const Entry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

/// Parse the MKF text format:
///   line 1:  mkf 1
///   line 2:  <count> <rows> <cols>
///   then per filter: one name line (no whitespace), followed by <rows>
///   lines of <cols> whitespace-separated decimal reals.
/// Row 0 is the top row (y = +radius_y); column 0 is x = -radius_x.
/// Throws ParseError (with line number), and dedicated errors for even
/// dimensions, non-finite values and duplicate names.
FilterBank load_bank(const std::string& path);

/// Parse MKF content from a string (used by load_bank and the tests).
FilterBank parse_bank(const std::string& text, const std::string& source_name);

/// Emit the MKF format with 17 significant digits so that every coefficient
/// round-trips exactly.  UTF-8, LF line endings.
void save_bank(const FilterBank& bank, const std::string& path);

/// The MKF serialization of a bank as a string.
std::string format_bank(const FilterBank& bank);

}  // namespace ssrf
