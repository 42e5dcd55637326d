// Command-line surface for the scale-space receptive-field toolkit:
// generate idealized filters, analyze/normalize/fit filter banks, render
// coefficient maps and classify filters against a reference set.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssrf/approx.hpp"
#include "ssrf/filter_bank.hpp"
#include "ssrf/measures.hpp"
#include "ssrf/pipeline.hpp"
#include "ssrf/render.hpp"

namespace fs = std::filesystem;
using namespace ssrf;

namespace {

constexpr int kExitInputError = 1;
constexpr int kExitNonConvergence = 2;

int effective_threads(int flag_value) {
  if (const char* env = std::getenv("SCALESPACE_FIT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return flag_value;
}

std::vector<FilterRole> resolve_roles(const FilterBank& bank, const std::string& assign_path) {
  if (!assign_path.empty()) return load_roles(assign_path, bank);
  return positional_roles(bank);
}

FitMethod parse_method(const std::string& token) {
  for (FitMethod m : {FitMethod::A, FitMethod::B, FitMethod::C1, FitMethod::C2, FitMethod::D1,
                      FitMethod::D2, FitMethod::Sharpen7L1, FitMethod::Sharpen7L2})
    if (token == method_name(m)) return m;
  throw std::invalid_argument("unknown method '" + token +
                              "' (expected A, B, C1, C2, D1, D2, S7L1 or S7L2)");
}

void print_table(const ReportTable& t) { std::cout << to_markdown(t); }

int cmd_gen(const std::string& family_token, double sigma_x, double sigma_y, double gamma,
            int radius, const std::string& output) {
  const Family family = family_from_token(family_token);
  IdealizedSpec spec{family, {sigma_x, sigma_y}, gamma};
  FilterBank bank;
  bank.entries.push_back(
      {std::string("ideal_") + family_label(family), ideal_filter(spec, radius, radius)});
  save_bank(bank, output);
  std::cout << "wrote " << output << "\n";
  return 0;
}

int cmd_analyze(const std::string& bank_path, bool weighted, double sigma0,
                const std::string& assign_path, int decimals) {
  const FilterBank bank = load_bank(bank_path);

  ReportTable stats;
  stats.title = "filter_statistics";
  stats.headers = {"filter", "l1_norm", "mean_x", "mean_y", "var_xx", "var_xy", "var_yy"};
  ReportTable resp;
  resp.title = "monomial_responses";
  resp.headers = {"filter", "resp_const", "resp_x", "resp_y"};
  for (const auto& e : bank.entries) {
    const SpreadMeasure sm = spread(e.grid);
    stats.add_row({e.name, fmt_fixed(l1_norm(e.grid), decimals), fmt_fixed(sm.mean.x, decimals),
                   fmt_fixed(sm.mean.y, decimals), fmt_fixed(sm.cov.xx, decimals),
                   fmt_fixed(sm.cov.xy, decimals), fmt_fixed(sm.cov.yy, decimals)});
    resp.add_row({e.name, fmt_fixed(respond_to_monomial(e.grid, 0, 0, sm.mean), 6),
                  fmt_fixed(respond_to_monomial(e.grid, 1, 0, sm.mean), decimals),
                  fmt_fixed(respond_to_monomial(e.grid, 0, 1, sm.mean), decimals)});
  }
  print_table(stats);
  print_table(resp);

  if (weighted) {
    const std::vector<FilterRole> roles = resolve_roles(bank, assign_path);
    ReportTable wt;
    wt.title = "weighted_spread";
    wt.headers = {"filter", "family", "wmean_x", "wmean_y", "wvar_xx", "wvar_xy", "wvar_yy"};
    for (const FilterRole& role : roles) {
      if (role.family == Family::Sharpen || role.family == Family::DxyMixed) continue;
      const FilterGrid& g = bank.find(role.name)->grid;
      const SpreadMeasure sm = spread(g, WeightSpec::for_family(role.family, sigma0));
      wt.add_row({role.name, family_label(role.family), fmt_fixed(sm.mean.x, decimals),
                  fmt_fixed(sm.mean.y, decimals), fmt_fixed(sm.cov.xx, decimals),
                  fmt_fixed(sm.cov.xy, decimals), fmt_fixed(sm.cov.yy, decimals)});
    }
    print_table(wt);
  }
  return 0;
}

int cmd_normalize(const std::string& bank_path, const std::string& output,
                  const std::string& assign_path, int decimals) {
  const FilterBank bank = load_bank(bank_path);
  const std::vector<FilterRole> roles = resolve_roles(bank, assign_path);

  FilterBank normalized;
  normalized.source = "generated";
  ReportTable t;
  t.title = "normalization";
  t.headers = {"filter", "family", "kind", "scale_applied", "dc_constant"};
  int failures = 0;
  for (const FilterRole& role : roles) {
    try {
      const NormalizedFilter nf = normalize_for_family(bank.find(role.name)->grid, role.family);
      normalized.entries.push_back({role.name, nf.grid});
      t.add_row({role.name, family_label(role.family),
                 nf.kind == NormKind::DcUnit ? "dc_unit"
                                             : (nf.kind == NormKind::DerivX ? "deriv_x" : "deriv_y"),
                 fmt_fixed(nf.scale_applied, decimals), fmt_fixed(nf.dc_constant, 4)});
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "normalize " << role.name << ": " << e.what() << "\n";
    }
  }
  if (normalized.entries.empty()) throw std::runtime_error("no filter could be normalized");
  save_bank(normalized, output);
  print_table(t);
  std::cout << "wrote " << output << "\n";
  return failures == 0 ? 0 : kExitInputError;
}

int cmd_fit(const std::string& bank_path, const std::string& method_token,
            const std::string& assign_path, const std::string& out_dir, double sigma0,
            int threads, int decimals) {
  const FilterBank bank = load_bank(bank_path);
  const std::vector<FilterRole> roles = load_roles(assign_path, bank);
  const FitMethod method = parse_method(method_token);

  struct Row {
    bool present = false;
    FitResult result;
    std::string error;
  };
  std::vector<Row> results(roles.size());
  const auto fit_one = [&](std::size_t i) {
    const FilterRole& role = roles[i];
    if (!method_applies(method, role.family)) return;
    results[i].present = true;
    try {
      const NormalizedFilter nf =
          role.family == Family::DxyMixed
              ? NormalizedFilter{bank.find(role.name)->grid, NormKind::DerivX, 1.0, 0.0}
              : normalize_for_family(bank.find(role.name)->grid, role.family);
      results[i].result = run_method(method, nf, role.family, sigma0, {});
    } catch (const std::exception& e) {
      results[i].present = false;
      results[i].error = e.what();
    }
  };
  if (threads > 1) {
    std::vector<std::future<void>> futures;
    std::size_t next = 0;
    while (next < roles.size()) {
      futures.clear();
      for (int t = 0; t < threads && next < roles.size(); ++t, ++next)
        futures.push_back(std::async(std::launch::async, fit_one, next));
      for (auto& f : futures) f.get();
    }
  } else {
    for (std::size_t i = 0; i < roles.size(); ++i) fit_one(i);
  }

  ReportTable t;
  t.title = std::string("method_") + method_name(method) + "_estimates";
  t.headers = {"filter", "family", "sigma_x", "sigma_y", "gamma",
               "residual_l1", "residual_l2", "evals", "converged"};
  std::string spec_text = std::string("method=") + method_name(method) + "\n";
  bool all_converged = true;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const FilterRole& role = roles[i];
    if (!results[i].error.empty()) {
      std::cerr << "fit " << role.name << ": " << results[i].error << "\n";
      continue;
    }
    if (!results[i].present) continue;
    const FitResult& r = results[i].result;
    if (!r.converged) all_converged = false;
    t.add_row({role.name, family_label(role.family), fmt_fixed(r.spec.scales.sigma_x, decimals),
               fmt_fixed(r.spec.scales.sigma_y, decimals),
               role.family == Family::Sharpen ? fmt_fixed(r.spec.gamma, decimals) : std::string(""),
               fmt_fixed(r.residual_l1, decimals), fmt_fixed(r.residual_l2, decimals),
               std::to_string(r.objective_evals), r.converged ? "yes" : "no"});
    spec_text += "filter=" + role.name + " family=" + family_label(role.family) +
                 " sigma_x=" + fmt_full(r.spec.scales.sigma_x) +
                 " sigma_y=" + fmt_full(r.spec.scales.sigma_y) + " gamma=" + fmt_full(r.spec.gamma) +
                 " residual_l1=" + fmt_full(r.residual_l1) +
                 " residual_l2=" + fmt_full(r.residual_l2) +
                 " converged=" + (r.converged ? "yes" : "no") + "\n";
  }

  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / (t.title + ".csv"), std::ios::binary);
    write_csv(t, csv);
    std::ofstream md(fs::path(out_dir) / (t.title + ".md"), std::ios::binary);
    write_markdown(t, md);
    std::ofstream spec(fs::path(out_dir) / (std::string("specs_") + method_name(method) + ".txt"),
                       std::ios::binary);
    spec << spec_text;
  }
  print_table(t);
  return all_converged ? 0 : kExitNonConvergence;
}

int cmd_render(const std::string& bank_path, const std::string& out_dir, int upscale) {
  const FilterBank bank = load_bank(bank_path);
  fs::create_directories(out_dir);
  for (const auto& e : bank.entries)
    render_ppm(e.grid, (fs::path(out_dir) / (e.name + ".ppm")).string(), upscale);
  std::cout << "wrote " << bank.entries.size() << " image(s) to " << out_dir << "\n";
  return 0;
}

int cmd_approx(const std::string& bank_path, const std::string& reference_path,
               const std::string& output) {
  const FilterBank bank = load_bank(bank_path);
  if (bank.entries.empty()) throw std::runtime_error("empty bank");
  const int radius = bank.entries.front().grid.radius_x();

  FilterBank reference =
      reference_path.empty() ? default_reference_bank(radius) : load_bank(reference_path);
  std::vector<FilterGrid> refs;
  for (const auto& e : reference.entries) refs.push_back(e.grid);

  ReportTable t;
  t.title = "affine_classification";
  t.headers = {"filter", "best_family", "best_name", "a", "b", "residual_l2", "ranking"};
  for (const auto& e : bank.entries) {
    const AffineMatch m = classify(e.grid, refs);
    std::string ranking;
    for (const auto& [idx, res] : m.rank) {
      if (!ranking.empty()) ranking += ';';
      ranking += std::to_string(idx) + ":" + fmt_fixed(res, 6);
    }
    t.add_row({e.name, std::to_string(m.family_index),
               reference.entries[static_cast<std::size_t>(m.family_index) - 1].name,
               fmt_fixed(m.a, 6), fmt_fixed(m.b, 6), fmt_fixed(m.residual_l2, 6), ranking});
  }
  {
    std::ofstream csv(output, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open output file: " + output);
    write_csv(t, csv);
  }
  print_table(t);
  return 0;
}

int cmd_pipeline(const std::string& bank_path, const std::string& assign_path,
                 const std::string& out_dir, double sigma0, int threads, int upscale,
                 int decimals) {
  const FilterBank bank = load_bank(bank_path);
  const std::vector<FilterRole> roles = resolve_roles(bank, assign_path);

  PipelineConfig config;
  config.sigma0 = sigma0;
  config.decimals = decimals;
  config.threads = threads;
  config.upscale = upscale;
  config.out_dir = out_dir;
  const PipelineOutput out = run_pipeline(bank, roles, config);

  for (const ReportTable& t : out.tables) print_table(t);
  for (const std::string& e : out.errors) std::cerr << "note: " << e << "\n";
  std::cout << "artifacts written to " << out_dir << "\n";
  return out.all_converged ? 0 : kExitNonConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete scale-space receptive-field modelling toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an idealized filter bank");
  std::string gen_family;
  double gen_sx = 0.0, gen_sy = 0.0, gen_gamma = 0.0;
  int gen_radius = 3;
  std::string gen_output;
  gen->add_option("--family", gen_family, "Family index 1..9 or name")->required();
  gen->add_option("--sigma-x", gen_sx, "Horizontal scale")->required();
  gen->add_option("--sigma-y", gen_sy, "Vertical scale")->required();
  gen->add_option("--gamma", gen_gamma, "Sharpening strength (family 7)");
  gen->add_option("--radius", gen_radius, "Support radius")->required();
  gen->add_option("-o,--output", gen_output, "Output MKF file")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Norms, spreads and monomial responses");
  std::string an_bank, an_assign;
  bool an_weighted = false;
  double an_sigma0 = 1.0;
  int an_decimals = 3;
  analyze->add_option("bank", an_bank, "MKF filter bank")->required();
  analyze->add_flag("--weighted", an_weighted, "Also compute weighted spread measures");
  analyze->add_option("--sigma0", an_sigma0, "Weighting kernel scale");
  analyze->add_option("--assign", an_assign, "Role config file (default: positional)");
  analyze->add_option("--decimals", an_decimals, "Table precision");

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Write the normalized bank");
  std::string no_bank, no_output, no_assign;
  int no_decimals = 3;
  normalize->add_option("bank", no_bank, "MKF filter bank")->required();
  normalize->add_option("-o,--output", no_output, "Output MKF file")->required();
  normalize->add_option("--assign", no_assign, "Role config file (default: positional)");
  normalize->add_option("--decimals", no_decimals, "Table precision");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit idealized models to a bank");
  std::string fit_bank, fit_method, fit_assign, fit_out;
  double fit_sigma0 = 1.0;
  int fit_threads = 1, fit_decimals = 3;
  fit->add_option("bank", fit_bank, "MKF filter bank")->required();
  fit->add_option("--method", fit_method, "A, B, C1, C2, D1, D2, S7L1 or S7L2")->required();
  fit->add_option("--assign", fit_assign, "Role config file")->required();
  fit->add_option("-o,--output", fit_out, "Output directory")->required();
  fit->add_option("--sigma0", fit_sigma0, "Weighting kernel scale");
  fit->add_option("--threads", fit_threads, "Worker threads");
  fit->add_option("--decimals", fit_decimals, "Table precision");

  // render
  auto* render = app.add_subcommand("render", "Render filters as PPM images");
  std::string re_bank, re_out;
  int re_upscale = 32;
  render->add_option("bank", re_bank, "MKF filter bank")->required();
  render->add_option("-o,--output", re_out, "Output directory")->required();
  render->add_option("--upscale", re_upscale, "Pixels per grid cell");

  // approx
  auto* approx = app.add_subcommand("approx", "Classify filters by affine match");
  std::string ap_bank, ap_reference, ap_out;
  approx->add_option("bank", ap_bank, "MKF filter bank")->required();
  approx->add_option("--reference", ap_reference, "Reference MKF bank (default: canonical)");
  approx->add_option("-o,--output", ap_out, "Output CSV report")->required();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Full analysis: tables, specs and images");
  std::string pi_bank, pi_assign, pi_out;
  double pi_sigma0 = 1.0;
  int pi_threads = 1, pi_upscale = 32, pi_decimals = 3;
  pipeline->add_option("bank", pi_bank, "MKF filter bank")->required();
  pipeline->add_option("--assign", pi_assign, "Role config file (default: positional)");
  pipeline->add_option("-o,--output", pi_out, "Output directory")->required();
  pipeline->add_option("--sigma0", pi_sigma0, "Weighting kernel scale");
  pipeline->add_option("--threads", pi_threads, "Worker threads");
  pipeline->add_option("--upscale", pi_upscale, "Pixels per grid cell");
  pipeline->add_option("--decimals", pi_decimals, "Table precision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInputError;
  }

  try {
    if (*gen) return cmd_gen(gen_family, gen_sx, gen_sy, gen_gamma, gen_radius, gen_output);
    if (*analyze) return cmd_analyze(an_bank, an_weighted, an_sigma0, an_assign, an_decimals);
    if (*normalize) return cmd_normalize(no_bank, no_output, no_assign, no_decimals);
    if (*fit)
      return cmd_fit(fit_bank, fit_method, fit_assign, fit_out, fit_sigma0,
                     effective_threads(fit_threads), fit_decimals);
    if (*render) return cmd_render(re_bank, re_out, re_upscale);
    if (*approx) return cmd_approx(ap_bank, ap_reference, ap_out);
    if (*pipeline)
      return cmd_pipeline(pi_bank, pi_assign, pi_out, pi_sigma0, effective_threads(pi_threads),
                          pi_upscale, pi_decimals);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
