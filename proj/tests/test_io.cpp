#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ssrf/filter_bank.hpp"
#include "ssrf/kernels.hpp"
#include "ssrf/pipeline.hpp"
#include "ssrf/render.hpp"
#include "ssrf/report.hpp"

using namespace ssrf;
namespace fs = std::filesystem;

namespace {

FilterBank random_bank(int filters, int radius, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  FilterBank bank;
  for (int k = 0; k < filters; ++k) {
    FilterBank::Entry e;
    e.name = "f" + std::to_string(k);
    e.grid = FilterGrid(radius, radius);
    for (double& v : e.grid.data()) v = dist(rng);
    // sprinkle exact and awkward values
    e.grid.at(0, 0) = 1.0 / 3.0;
    e.grid.at(radius, radius) = 0.1;
    bank.entries.push_back(std::move(e));
  }
  return bank;
}

std::string tmp_path(const std::string& leaf) {
  return (fs::temp_directory_path() / leaf).string();
}

}  // namespace

TEST_CASE("well-formed banks parse with the stated orientation") {
  const std::string text =
      "mkf 1\n"
      "2 3 3\n"
      "a\n"
      "1 2 3\n"
      "4 5 6\n"
      "7 8 9\n"
      "b\n"
      "0 0 0\n"
      "0 1 0\n"
      "0 0 0\n";
  const FilterBank bank = parse_bank(text, "inline");
  REQUIRE(bank.entries.size() == 2);
  const FilterGrid& g = bank.entries[0].grid;
  CHECK(g.at(-1, 1) == 1.0);   // row 0, column 0 is the top-left
  CHECK(g.at(1, 1) == 3.0);
  CHECK(g.at(0, 0) == 5.0);
  CHECK(g.at(1, -1) == 9.0);
  CHECK(bank.entries[1].grid.at(0, 0) == 1.0);
  CHECK(bank.find("b") != nullptr);
  CHECK(bank.find("missing") == nullptr);
}

TEST_CASE("malformed banks are rejected with line information") {
  CHECK_THROWS_WITH_AS(parse_bank("mkg 1\n0 3 3\n", "x"),
                       doctest::Contains("expected header"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1 junk\n0 3 3\n", "x"),
                       doctest::Contains("expected header"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n0 3 3 junk\n", "x"),
                       doctest::Contains("<count> <rows> <cols>"), ParseError);

  try {
    parse_bank("mkf 1\n1 3 4\nname\n", "x");
    FAIL("even dimensions accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("dimension") != std::string::npos);
  }

  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n1 3 3\na\n1 2\n3 4 5\n6 7 8\n", "x"),
                       doctest::Contains("dimension error"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n1 3 3\na\n1 2 3 4\n5 6 7\n8 9 0\n", "x"),
                       doctest::Contains("trailing data"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n1 3 3\na\n1 2 nan\n4 5 6\n7 8 9\n", "x"),
                       doctest::Contains("non-finite"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_bank("mkf 1\n2 1 1\na\n1\na\n2\n", "x"), doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n1 3 3\na\n1 2 3\n", "x"),
                       doctest::Contains("unexpected end"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n0 1 1\nleftover\n", "x"),
                       doctest::Contains("trailing content"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bank("mkf 1\n1 1 1\nbad name\n1\n", "x"),
                       doctest::Contains("single non-empty token"), ParseError);
}

TEST_CASE("save and load round-trip every coefficient exactly") {
  const std::string path = tmp_path("ssrf_roundtrip.mkf");
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const FilterBank bank = random_bank(3, 3, seed);
    save_bank(bank, path);
    const FilterBank loaded = load_bank(path);
    REQUIRE(loaded.entries.size() == bank.entries.size());
    for (std::size_t i = 0; i < bank.entries.size(); ++i) {
      CHECK(loaded.entries[i].name == bank.entries[i].name);
      for (std::size_t j = 0; j < bank.entries[i].grid.data().size(); ++j)
        CHECK(loaded.entries[i].grid.data()[j] == bank.entries[i].grid.data()[j]);
    }
  }
  fs::remove(path);
}

TEST_CASE("empty and generated banks serialize as expected") {
  const FilterBank empty;
  CHECK(format_bank(empty) == "mkf 1\n0 1 1\n");
  const FilterBank back = parse_bank(format_bank(empty), "x");
  CHECK(back.entries.empty());

  const FilterBank nine = default_reference_bank(3);
  const std::string text = format_bank(nine);
  const FilterBank parsed = parse_bank(text, "x");
  CHECK(parsed.entries.size() == 9);
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 2 + 9 * 8);  // header + 9 blocks of name + 7 rows
}

TEST_CASE("the diverging color map anchors are exact") {
  CHECK(diverging_color(0.0, 1.0).r == 255);
  CHECK(diverging_color(0.0, 1.0).g == 255);
  CHECK(diverging_color(0.0, 1.0).b == 255);
  const Rgb pos = diverging_color(1.0, 1.0);
  CHECK(pos.r == 178);
  CHECK(pos.g == 24);
  CHECK(pos.b == 43);
  const Rgb neg = diverging_color(-1.0, 1.0);
  CHECK(neg.r == 33);
  CHECK(neg.g == 102);
  CHECK(neg.b == 172);
}

TEST_CASE("the impulse renders as the frozen golden image") {
  const std::vector<std::uint8_t> img = render_ppm_bytes(FilterGrid::impulse(3, 3), 10);

  // hand-built golden: 70x70 P6, white field, centered 10x10 block in the
  // positive endpoint color
  std::string header = "P6\n70 70\n255\n";
  std::vector<std::uint8_t> golden(header.begin(), header.end());
  for (int row = 0; row < 70; ++row)
    for (int col = 0; col < 70; ++col) {
      const bool center = row >= 30 && row < 40 && col >= 30 && col < 40;
      golden.push_back(center ? 178 : 255);
      golden.push_back(center ? 24 : 255);
      golden.push_back(center ? 43 : 255);
    }
  REQUIRE(img.size() == golden.size());
  CHECK(img == golden);
}

TEST_CASE("zero grids render white and negation swaps the endpoints") {
  const std::vector<std::uint8_t> blank = render_ppm_bytes(FilterGrid(2, 2), 3);
  for (std::size_t i = std::string("P6\n15 15\n255\n").size(); i < blank.size(); ++i)
    CHECK(blank[i] == 255);

  const FilterGrid neg = -1.0 * FilterGrid::impulse(1, 1);
  const std::vector<std::uint8_t> img = render_ppm_bytes(neg, 1);
  const std::size_t off = std::string("P6\n3 3\n255\n").size();
  const std::size_t center = off + (1 * 3 + 1) * 3;
  CHECK(img[center + 0] == 33);
  CHECK(img[center + 1] == 102);
  CHECK(img[center + 2] == 172);

  CHECK_THROWS(render_ppm_bytes(FilterGrid(1, 1), 0));
}

TEST_CASE("table cells format deterministically with banker's rounding on ties") {
  CHECK(fmt_fixed(0.125, 2) == "0.12");
  CHECK(fmt_fixed(0.375, 2) == "0.38");
  CHECK(fmt_fixed(2.5, 0) == "2");
  CHECK(fmt_fixed(-0.0001, 3) == "0.000");
  CHECK(fmt_fixed(-1.2345, 3) == "-1.234");  // exact binary value is below the tie

  ReportTable t;
  t.title = "demo";
  t.headers = {"name", "value"};
  t.add_row({"a", fmt_fixed(1.0 / 3.0, 3)});
  t.add_row({"b", fmt_fixed(-2.0 / 7.0, 3)});
  const std::string csv = to_csv(t);
  const std::string md = to_markdown(t);
  CHECK(csv.find("0.333") != std::string::npos);
  CHECK(md.find("0.333") != std::string::npos);
  CHECK(csv.find("-0.286") != std::string::npos);
  CHECK(md.find("-0.286") != std::string::npos);
  CHECK(to_csv(t) == csv);

  ReportTable bad = t;
  CHECK_THROWS_AS(bad.add_row({"only-one-cell"}), std::invalid_argument);
}

TEST_CASE("the pipeline emits byte-identical artifacts across runs and thread counts") {
  // synthetic bank playing the eight master-filter roles
  FilterBank bank;
  const struct {
    Family family;
    double sx, sy, gamma;
  } rows[] = {
      {Family::DyPlus, 0.64, 0.58, 0.0},  {Family::DxMinus, 0.59, 0.64, 0.0},
      {Family::DyMinus, 0.69, 0.67, 0.0}, {Family::DxPlus, 0.76, 0.46, 0.0},
      {Family::DxCentered, 1.1, 0.95, 0.0}, {Family::DyCentered, 0.9, 0.89, 0.0},
      {Family::Sharpen, 0.65, 0.65, 0.52}, {Family::Smooth, 0.61, 0.6, 0.0},
  };
  int i = 0;
  for (const auto& r : rows) {
    bank.entries.push_back({"filter" + std::to_string(++i),
                            ideal_filter({r.family, {r.sx, r.sy}, r.gamma}, 3, 3)});
  }
  const std::vector<FilterRole> roles = positional_roles(bank);

  PipelineConfig config;
  config.out_dir = tmp_path("ssrf_pipe_a");
  const PipelineOutput a = run_pipeline(bank, roles, config);
  config.out_dir = tmp_path("ssrf_pipe_b");
  config.threads = 2;
  const PipelineOutput b = run_pipeline(bank, roles, config);

  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t k = 0; k < a.tables.size(); ++k) CHECK(to_csv(a.tables[k]) == to_csv(b.tables[k]));
  CHECK(a.spec_texts == b.spec_texts);
  CHECK(a.errors == b.errors);

  // compare emitted CSV files byte for byte
  for (const auto& entry : fs::directory_iterator(fs::path(tmp_path("ssrf_pipe_a")) / "tables")) {
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(fs::path(tmp_path("ssrf_pipe_b")) / "tables" / entry.path().filename(),
                     std::ios::binary);
    REQUIRE(fb.good());
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  CHECK(a.all_converged);

  fs::remove_all(tmp_path("ssrf_pipe_a"));
  fs::remove_all(tmp_path("ssrf_pipe_b"));
}

TEST_CASE("a failing filter does not abort the rest of the pipeline") {
  FilterBank bank;
  bank.entries.push_back({"dead", FilterGrid(3, 3)});  // all-zero: normalization fails
  bank.entries.push_back({"alive", ideal_filter({Family::Smooth, {0.6, 0.6}, 0.0}, 3, 3)});
  const std::vector<FilterRole> roles = {{"dead", Family::DyPlus}, {"alive", Family::Smooth}};

  PipelineConfig config;
  const PipelineOutput out = run_pipeline(bank, roles, config);
  CHECK(!out.errors.empty());
  bool alive_fitted = false;
  for (const ReportTable& t : out.tables)
    if (t.title == "method_B_estimates")
      for (const auto& row : t.rows)
        if (row[0] == "alive") alive_fitted = true;
  CHECK(alive_fitted);
}

TEST_CASE("role configs are validated") {
  FilterBank bank;
  bank.entries.push_back({"alpha", FilterGrid::impulse(3, 3)});
  bank.entries.push_back({"beta", FilterGrid::impulse(3, 3)});

  const std::string path = tmp_path("ssrf_roles.txt");
  {
    std::ofstream out(path);
    out << "# comment line\nalpha 8\nbeta 7\n";
  }
  const auto roles = load_roles(path, bank);
  REQUIRE(roles.size() == 2);
  CHECK(roles[0].family == Family::Smooth);
  CHECK(roles[1].family == Family::Sharpen);

  {
    std::ofstream out(path);
    out << "alpha 12\n";
  }
  CHECK_THROWS(load_roles(path, bank));
  {
    std::ofstream out(path);
    out << "gamma 1\n";
  }
  CHECK_THROWS(load_roles(path, bank));
  {
    std::ofstream out(path);
    out << "alpha 1\nalpha 2\n";
  }
  CHECK_THROWS(load_roles(path, bank));
  fs::remove(path);

  const auto positional = positional_roles(bank);
  CHECK(positional[0].family == Family::DyPlus);
  CHECK(positional[1].family == Family::DxMinus);
}
