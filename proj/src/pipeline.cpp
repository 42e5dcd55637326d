#include "ssrf/pipeline.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ssrf/measures.hpp"
#include "ssrf/render.hpp"

namespace ssrf {

namespace fs = std::filesystem;

std::vector<FilterRole> positional_roles(const FilterBank& bank) {
  if (bank.entries.empty() || bank.entries.size() > 9)
    throw std::invalid_argument("positional role assignment needs 1..9 bank entries");
  std::vector<FilterRole> roles;
  for (std::size_t i = 0; i < bank.entries.size(); ++i)
    roles.push_back({bank.entries[i].name, static_cast<Family>(i + 1)});
  return roles;
}

std::vector<FilterRole> load_roles(const std::string& path, const FilterBank& bank) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open role config: " + path);

  std::vector<FilterRole> roles;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    int family = 0;
    if (!(ls >> family) || family < 1 || family > 9)
      throw std::runtime_error("role config line " + std::to_string(line_no) +
                               ": expected '<name> <family 1..9>'");
    if (!bank.find(name))
      throw std::runtime_error("role config line " + std::to_string(line_no) +
                               ": no bank entry named '" + name + "'");
    if (!seen.insert(name).second)
      throw std::runtime_error("role config line " + std::to_string(line_no) +
                               ": entry '" + name + "' assigned twice");
    roles.push_back({name, static_cast<Family>(family)});
  }
  if (roles.empty()) throw std::runtime_error("role config is empty: " + path);
  return roles;
}

NormalizedFilter normalize_for_family(const FilterGrid& grid, Family family) {
  switch (family) {
    case Family::DxMinus:
    case Family::DxPlus:
    case Family::DxCentered:
      return normalize_derivative(grid, Axis::X);
    case Family::DyPlus:
    case Family::DyMinus:
    case Family::DyCentered:
      return normalize_derivative(grid, Axis::Y);
    case Family::Sharpen:
    case Family::Smooth:
      return dc_compensate(grid);
    default:
      throw std::invalid_argument("family 9 has no normalization rule");
  }
}

bool method_applies(FitMethod method, Family family) {
  const bool variance_family = family != Family::Sharpen && family != Family::DxyMixed;
  switch (method) {
    case FitMethod::A:
    case FitMethod::B:
      return variance_family;
    case FitMethod::C1:
    case FitMethod::D1:
      return family != Family::Sharpen;
    case FitMethod::C2:
    case FitMethod::D2:
      return true;  // family 7 handled by the two-parameter scheme
    case FitMethod::Sharpen7L1:
    case FitMethod::Sharpen7L2:
      return family == Family::Sharpen;
  }
  return false;
}

FitResult run_method(FitMethod method, const NormalizedFilter& h_norm, Family family,
                     double sigma0, const Bounds1D& bounds) {
  switch (method) {
    case FitMethod::A:
      return method_a(h_norm, family, sigma0);
    case FitMethod::B:
      return method_b(h_norm, family, sigma0, bounds);
    case FitMethod::C1:
      return method_norm_fit(h_norm, family, FitNorm::L1, false, bounds);
    case FitMethod::C2:
      if (family == Family::Sharpen) return fit_sharpen7(h_norm, FitNorm::L1, bounds);
      return method_norm_fit(h_norm, family, FitNorm::L1, true, bounds);
    case FitMethod::D1:
      return method_norm_fit(h_norm, family, FitNorm::L2, false, bounds);
    case FitMethod::D2:
      if (family == Family::Sharpen) return fit_sharpen7(h_norm, FitNorm::L2, bounds);
      return method_norm_fit(h_norm, family, FitNorm::L2, true, bounds);
    case FitMethod::Sharpen7L1:
      return fit_sharpen7(h_norm, FitNorm::L1, bounds);
    case FitMethod::Sharpen7L2:
      return fit_sharpen7(h_norm, FitNorm::L2, bounds);
  }
  throw std::logic_error("unknown fit method");
}

const char* method_name(FitMethod method) {
  switch (method) {
    case FitMethod::A: return "A";
    case FitMethod::B: return "B";
    case FitMethod::C1: return "C1";
    case FitMethod::C2: return "C2";
    case FitMethod::D1: return "D1";
    case FitMethod::D2: return "D2";
    case FitMethod::Sharpen7L1: return "S7L1";
    case FitMethod::Sharpen7L2: return "S7L2";
  }
  return "?";
}

const char* family_label(Family family) {
  switch (family) {
    case Family::DyPlus: return "dy_plus";
    case Family::DxMinus: return "dx_minus";
    case Family::DyMinus: return "dy_minus";
    case Family::DxPlus: return "dx_plus";
    case Family::DxCentered: return "dx";
    case Family::DyCentered: return "dy";
    case Family::Sharpen: return "sharpen";
    case Family::Smooth: return "smooth";
    case Family::DxyMixed: return "dxy";
  }
  return "?";
}

Family family_from_token(const std::string& token) {
  for (int i = 1; i <= 9; ++i)
    if (token == std::to_string(i) || token == family_label(static_cast<Family>(i)))
      return static_cast<Family>(i);
  throw std::invalid_argument("unknown family '" + token + "' (use 1..9 or a family name)");
}

FilterBank default_reference_bank(int radius) {
  // Canonical scale table for the nine idealized families; overridable by a
  // user-supplied reference bank.
  struct Row {
    Family family;
    double sx, sy, gamma;
  };
  static constexpr Row kRows[] = {
      {Family::DyPlus, 0.644, 0.583, 0.0},    {Family::DxMinus, 0.586, 0.644, 0.0},
      {Family::DyMinus, 0.690, 0.674, 0.0},   {Family::DxPlus, 0.756, 0.460, 0.0},
      {Family::DxCentered, 1.107, 0.945, 0.0}, {Family::DyCentered, 0.900, 0.889, 0.0},
      {Family::Sharpen, 0.654, 0.654, 0.522}, {Family::Smooth, 0.609, 0.601, 0.0},
      {Family::DxyMixed, 0.600, 0.600, 0.0},
  };
  FilterBank bank;
  bank.source = "generated";
  for (const Row& r : kRows) {
    FilterBank::Entry e;
    e.name = std::string("ideal_") + family_label(r.family);
    e.grid = ideal_filter({r.family, {r.sx, r.sy}, r.gamma}, radius, radius);
    bank.entries.push_back(std::move(e));
  }
  return bank;
}

namespace {

constexpr FitMethod kMethodOrder[] = {FitMethod::A,  FitMethod::B,  FitMethod::C1,
                                      FitMethod::C2, FitMethod::D1, FitMethod::D2};

struct FitCell {
  bool attempted = false;
  bool ok = false;
  FitResult result;
  std::string error;
};

struct RoleData {
  FilterRole role;
  FilterGrid raw;
  std::optional<NormalizedFilter> norm;
  std::string norm_error;
  std::array<FitCell, 6> fits;
  FitCell sharpen_l1, sharpen_l2;
};

void fit_one_role(RoleData& rd, double sigma0, const Bounds1D& bounds) {
  if (!rd.norm) return;
  for (std::size_t mi = 0; mi < std::size(kMethodOrder); ++mi) {
    const FitMethod m = kMethodOrder[mi];
    if (!method_applies(m, rd.role.family)) continue;
    FitCell& cell = rd.fits[mi];
    cell.attempted = true;
    try {
      cell.result = run_method(m, *rd.norm, rd.role.family, sigma0, bounds);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  }
  if (rd.role.family == Family::Sharpen) {
    for (FitCell* cell : {&rd.sharpen_l1, &rd.sharpen_l2}) {
      cell->attempted = true;
      try {
        cell->result = fit_sharpen7(*rd.norm, cell == &rd.sharpen_l1 ? FitNorm::L1 : FitNorm::L2,
                                    bounds);
        cell->ok = true;
      } catch (const std::exception& e) {
        cell->error = e.what();
      }
    }
  }
}

std::string safe_filename(const std::string& title) {
  std::string out;
  for (char c : title) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

PipelineOutput run_pipeline(const FilterBank& bank, const std::vector<FilterRole>& roles,
                            const PipelineConfig& config) {
  PipelineOutput out;
  const int dec = config.decimals;

  std::vector<RoleData> data;
  for (const FilterRole& role : roles) {
    const FilterBank::Entry* entry = bank.find(role.name);
    if (!entry) throw std::invalid_argument("no bank entry named '" + role.name + "'");
    RoleData rd;
    rd.role = role;
    rd.raw = entry->grid;
    data.push_back(std::move(rd));
  }

  // Stage 1: unweighted statistics of the raw filters.
  {
    ReportTable t;
    t.title = "filter_statistics";
    t.headers = {"filter", "family", "l1_norm", "mean_x", "mean_y",
                 "var_xx", "var_xy", "var_yy"};
    for (const RoleData& rd : data) {
      try {
        const SpreadMeasure sm = spread(rd.raw);
        t.add_row({rd.role.name, family_label(rd.role.family), fmt_fixed(l1_norm(rd.raw), dec),
                   fmt_fixed(sm.mean.x, dec), fmt_fixed(sm.mean.y, dec), fmt_fixed(sm.cov.xx, dec),
                   fmt_fixed(sm.cov.xy, dec), fmt_fixed(sm.cov.yy, dec)});
      } catch (const std::exception& e) {
        out.errors.push_back("filter_statistics " + rd.role.name + ": " + e.what());
      }
    }
    out.tables.push_back(std::move(t));
  }

  // Stage 2: responses to the shift-adjusted monomials.
  {
    ReportTable t;
    t.title = "monomial_responses";
    t.headers = {"filter", "family", "resp_const", "resp_x", "resp_y"};
    for (const RoleData& rd : data) {
      try {
        const Vec2 m = spread(rd.raw).mean;
        t.add_row({rd.role.name, family_label(rd.role.family),
                   fmt_fixed(respond_to_monomial(rd.raw, 0, 0, m), 6),
                   fmt_fixed(respond_to_monomial(rd.raw, 1, 0, m), dec),
                   fmt_fixed(respond_to_monomial(rd.raw, 0, 1, m), dec)});
      } catch (const std::exception& e) {
        out.errors.push_back("monomial_responses " + rd.role.name + ": " + e.what());
      }
    }
    out.tables.push_back(std::move(t));
  }

  // Stage 3: normalization.
  for (RoleData& rd : data) {
    try {
      rd.norm = normalize_for_family(rd.raw, rd.role.family);
    } catch (const std::exception& e) {
      rd.norm_error = e.what();
      if (rd.role.family == Family::DxyMixed) {
        // no normalization rule; fit the raw filter as-is
        rd.norm = NormalizedFilter{rd.raw, NormKind::DerivX, 1.0, 0.0};
        out.errors.push_back("normalize " + rd.role.name + ": " + rd.norm_error +
                             " (fitting the raw filter)");
      } else {
        out.errors.push_back("normalize " + rd.role.name + ": " + rd.norm_error);
      }
    }
  }

  {
    ReportTable t;
    t.title = "normalized_derivative_responses";
    t.headers = {"filter", "family", "scale_applied", "resp_x", "resp_y"};
    for (const RoleData& rd : data) {
      if (!rd.norm || rd.norm->kind == NormKind::DcUnit || rd.role.family == Family::DxyMixed)
        continue;
      const Vec2 m = spread(rd.norm->grid).mean;
      t.add_row({rd.role.name, family_label(rd.role.family), fmt_fixed(rd.norm->scale_applied, dec),
                 fmt_fixed(respond_to_monomial(rd.norm->grid, 1, 0, m), dec),
                 fmt_fixed(respond_to_monomial(rd.norm->grid, 0, 1, m), dec)});
    }
    out.tables.push_back(std::move(t));
  }

  {
    ReportTable t;
    t.title = "dc_compensation";
    t.headers = {"filter", "family", "dc_constant", "l1_norm_dc", "mean_x", "mean_y",
                 "var_xx", "var_xy", "var_yy"};
    for (const RoleData& rd : data) {
      if (!rd.norm || rd.norm->kind != NormKind::DcUnit) continue;
      // statistics of the DC-subtracted (not yet rescaled) filter
      FilterGrid dc = rd.raw;
      for (double& v : dc.data()) v -= rd.norm->dc_constant;
      const SpreadMeasure sm = spread(dc);
      t.add_row({rd.role.name, family_label(rd.role.family), fmt_fixed(rd.norm->dc_constant, 4),
                 fmt_fixed(l1_norm(dc), dec), fmt_fixed(sm.mean.x, dec), fmt_fixed(sm.mean.y, dec),
                 fmt_fixed(sm.cov.xx, dec), fmt_fixed(sm.cov.xy, dec), fmt_fixed(sm.cov.yy, dec)});
    }
    out.tables.push_back(std::move(t));
  }

  {
    ReportTable t;
    t.title = "dc_unit_responses";
    t.headers = {"filter", "family", "resp_const", "resp_x", "resp_y"};
    for (const RoleData& rd : data) {
      if (!rd.norm || rd.norm->kind != NormKind::DcUnit) continue;
      const Vec2 m = spread(rd.norm->grid).mean;
      t.add_row({rd.role.name, family_label(rd.role.family),
                 fmt_fixed(respond_to_monomial(rd.norm->grid, 0, 0, {0.0, 0.0}), dec),
                 fmt_fixed(respond_to_monomial(rd.norm->grid, 1, 0, m), dec),
                 fmt_fixed(respond_to_monomial(rd.norm->grid, 0, 1, m), dec)});
    }
    out.tables.push_back(std::move(t));
  }

  // Stage 4: weighted spread measures of the normalized filters.
  {
    ReportTable t;
    t.title = "weighted_spread";
    t.headers = {"filter", "family", "wmean_x", "wmean_y", "wvar_xx", "wvar_xy", "wvar_yy"};
    for (const RoleData& rd : data) {
      if (!rd.norm) continue;
      if (rd.role.family == Family::Sharpen || rd.role.family == Family::DxyMixed) continue;
      try {
        const SpreadMeasure sm =
            spread(rd.norm->grid, WeightSpec::for_family(rd.role.family, config.sigma0));
        t.add_row({rd.role.name, family_label(rd.role.family), fmt_fixed(sm.mean.x, dec),
                   fmt_fixed(sm.mean.y, dec), fmt_fixed(sm.cov.xx, dec), fmt_fixed(sm.cov.xy, dec),
                   fmt_fixed(sm.cov.yy, dec)});
      } catch (const std::exception& e) {
        out.errors.push_back("weighted_spread " + rd.role.name + ": " + e.what());
      }
    }
    out.tables.push_back(std::move(t));
  }

  // Stage 5: model fits, optionally across threads, gathered in bank order.
  if (config.threads > 1) {
    std::vector<std::future<void>> futures;
    std::size_t next = 0;
    while (next < data.size()) {
      futures.clear();
      for (int t = 0; t < config.threads && next < data.size(); ++t, ++next) {
        RoleData* rd = &data[next];
        futures.push_back(std::async(std::launch::async, [rd, &config]() {
          fit_one_role(*rd, config.sigma0, config.bounds);
        }));
      }
      for (auto& f : futures) f.get();
    }
  } else {
    for (RoleData& rd : data) fit_one_role(rd, config.sigma0, config.bounds);
  }

  for (std::size_t mi = 0; mi < std::size(kMethodOrder); ++mi) {
    const FitMethod m = kMethodOrder[mi];
    ReportTable t;
    t.title = std::string("method_") + method_name(m) + "_estimates";
    t.headers = {"filter", "family", "sigma_x", "sigma_y", "gamma",
                 "residual_l1", "residual_l2", "evals", "converged"};
    std::string spec_text = std::string("method=") + method_name(m) + "\n";
    for (const RoleData& rd : data) {
      const FitCell& cell = rd.fits[mi];
      if (!cell.attempted) continue;
      if (!cell.ok) {
        out.errors.push_back(std::string("fit ") + method_name(m) + " " + rd.role.name + ": " +
                             cell.error);
        continue;
      }
      const FitResult& r = cell.result;
      if (!r.converged) out.all_converged = false;
      t.add_row({rd.role.name, family_label(rd.role.family), fmt_fixed(r.spec.scales.sigma_x, dec),
                 fmt_fixed(r.spec.scales.sigma_y, dec),
                 r.spec.family == Family::Sharpen ? fmt_fixed(r.spec.gamma, dec) : std::string(""),
                 fmt_fixed(r.residual_l1, dec), fmt_fixed(r.residual_l2, dec),
                 std::to_string(r.objective_evals), r.converged ? "yes" : "no"});
      spec_text += "filter=" + rd.role.name + " family=" + family_label(rd.role.family) +
                   " sigma_x=" + fmt_full(r.spec.scales.sigma_x) +
                   " sigma_y=" + fmt_full(r.spec.scales.sigma_y) +
                   " gamma=" + fmt_full(r.spec.gamma) + " residual_l1=" + fmt_full(r.residual_l1) +
                   " residual_l2=" + fmt_full(r.residual_l2) +
                   " evals=" + std::to_string(r.objective_evals) +
                   " converged=" + (r.converged ? "yes" : "no") + "\n";
    }
    out.tables.push_back(std::move(t));
    out.spec_texts.push_back(std::move(spec_text));
  }

  {
    ReportTable t;
    t.title = "sharpen_two_parameter";
    t.headers = {"filter", "norm", "sigma", "gamma", "residual"};
    for (const RoleData& rd : data) {
      if (!rd.sharpen_l1.attempted) continue;
      if (rd.sharpen_l1.ok)
        t.add_row({rd.role.name, "l1", fmt_fixed(rd.sharpen_l1.result.spec.scales.sigma_x, dec),
                   fmt_fixed(rd.sharpen_l1.result.spec.gamma, dec),
                   fmt_fixed(rd.sharpen_l1.result.residual_l1, dec)});
      if (rd.sharpen_l2.ok)
        t.add_row({rd.role.name, "l2", fmt_fixed(rd.sharpen_l2.result.spec.scales.sigma_x, dec),
                   fmt_fixed(rd.sharpen_l2.result.spec.gamma, dec),
                   fmt_fixed(rd.sharpen_l2.result.residual_l2, dec)});
    }
    out.tables.push_back(std::move(t));
  }

  // Stage 6: artifacts.
  if (!config.out_dir.empty()) {
    const fs::path root(config.out_dir);
    fs::create_directories(root / "tables");
    fs::create_directories(root / "specs");

    std::ofstream md(root / "report.md", std::ios::binary);
    if (!md) throw std::runtime_error("cannot open " + (root / "report.md").string());
    md << "# Filter analysis report\n\n";
    int index = 0;
    for (const ReportTable& t : out.tables) {
      ++index;
      char prefix[16];
      std::snprintf(prefix, sizeof(prefix), "t%02d_", index);
      std::ofstream csv(root / "tables" / (prefix + safe_filename(t.title) + ".csv"),
                        std::ios::binary);
      write_csv(t, csv);
      write_markdown(t, md);
    }

    for (std::size_t mi = 0; mi < std::size(kMethodOrder); ++mi) {
      std::ofstream spec(root / "specs" /
                             (std::string("method_") + method_name(kMethodOrder[mi]) + ".txt"),
                         std::ios::binary);
      spec << out.spec_texts[mi];
    }

    if (!out.errors.empty()) {
      std::ofstream err(root / "errors.txt", std::ios::binary);
      for (const std::string& e : out.errors) err << e << '\n';
    }

    if (config.render_images) {
      fs::create_directories(root / "ppm");
      for (const RoleData& rd : data) {
        render_ppm(rd.raw, (root / "ppm" / ("learned_" + rd.role.name + ".ppm")).string(),
                   config.upscale);
        if (rd.norm)
          render_ppm(rd.norm->grid,
                     (root / "ppm" / ("normalized_" + rd.role.name + ".ppm")).string(),
                     config.upscale);
        for (std::size_t mi = 0; mi < std::size(kMethodOrder); ++mi) {
          const FitCell& cell = rd.fits[mi];
          if (!cell.ok) continue;
          const FilterGrid ideal =
              ideal_filter(cell.result.spec, kFitSupportRadius, kFitSupportRadius);
          render_ppm(ideal,
                     (root / "ppm" / (std::string("ideal_") + method_name(kMethodOrder[mi]) + "_" +
                                      rd.role.name + ".ppm"))
                         .string(),
                     config.upscale);
        }
      }
    }
  }

  return out;
}

}  // namespace ssrf
