#pragma once

#include <string>
#include <vector>

#include "ssrf/filter_bank.hpp"
#include "ssrf/fit.hpp"
#include "ssrf/normalize.hpp"
#include "ssrf/report.hpp"

namespace ssrf {

/// Master-filter role of one bank entry.
struct FilterRole {
  std::string name;
  Family family = Family::Smooth;
};

/// Entry i plays family i+1.  Requires 1..9 entries.
std::vector<FilterRole> positional_roles(const FilterBank& bank);

/// Role config file: one `<name> <family-index>` pair per line, '#' comments
/// allowed.  Every named entry must exist in the bank.
std::vector<FilterRole> load_roles(const std::string& path, const FilterBank& bank);

/// Normalization matching a family's role: derivative rescaling for
/// families 1-6 (x for 2/4/5, y for 1/3/6), DC compensation for 7-8.
/// Throws for family 9, which has no normalization rule.
NormalizedFilter normalize_for_family(const FilterGrid& grid, Family family);

/// Whether a fitting method is defined for a family (A/B: 1-6 and 8;
/// C1/D1: 1-6, 8, 9; C2/D2: 1-6, 8, 9 plus 7 via the two-parameter scheme;
/// S7L1/S7L2: family 7 only).
bool method_applies(FitMethod method, Family family);

/// Dispatch one fit.
FitResult run_method(FitMethod method, const NormalizedFilter& h_norm, Family family,
                     double sigma0, const Bounds1D& bounds);

const char* method_name(FitMethod method);
const char* family_label(Family family);

/// Family from a CLI token: an index 1..9 or a family_label string.
Family family_from_token(const std::string& token);

/// Reference bank of the nine idealized filters at the documented canonical
/// scales, used by the classifier when no reference bank is supplied.
FilterBank default_reference_bank(int radius);

struct PipelineConfig {
  double sigma0 = 1.0;
  int decimals = 3;
  int threads = 1;
  int upscale = 32;
  Bounds1D bounds;
  bool render_images = true;
  std::string out_dir;  // empty: keep results in memory only
};

struct PipelineOutput {
  std::vector<ReportTable> tables;
  std::vector<std::string> spec_texts;  // one key/value block per method
  std::vector<std::string> errors;      // per-stage failures, pipeline continues
  bool all_converged = true;
};

/// Full analysis in the order norms/spreads -> normalization -> weighted
/// spreads -> fits, emitting table analogues as CSV and Markdown, fitted-spec
/// key/value text and rendered PPMs under out_dir.  Per-stage errors are
/// carried into the report without aborting the other filters.  Output
/// ordering is deterministic; per-filter fits may run on config.threads
/// threads with results gathered in bank order.
PipelineOutput run_pipeline(const FilterBank& bank, const std::vector<FilterRole>& roles,
                            const PipelineConfig& config);

}  // namespace ssrf
