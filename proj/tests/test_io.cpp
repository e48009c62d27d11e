#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "thzorient/result_file.hpp"
#include "thzorient/run_setup.hpp"
#include "thzorient/svg.hpp"

using namespace thzo;
namespace fs = std::filesystem;

namespace {

// Minimal XML well-formedness check: tags balance and nest properly.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) return false;
    if (name[0] == '/') {
      if (stack.empty() || stack.back() != name.substr(1)) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("sig12 formatting keeps 12 significant digits") {
  CHECK(format_sig12(0.0488085583565341) == "0.0488085583565");
  CHECK(format_sig12(1.0) == "1");
  CHECK(format_sig12(-2.5e-13) == "-2.5e-13");
}

TEST_CASE("atomic writes leave no temporary behind") {
  const fs::path dir = fs::temp_directory_path() / "thzo_test_io";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path p = dir / "x.csv";
  write_text_atomic(p, "a,b\n1,2\n");
  CHECK(fs::exists(p));
  CHECK(!fs::exists(dir / "x.csv.tmp"));
  write_text_atomic(p, "replaced\n");
  std::ifstream in(p);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "replaced\n");
}

TEST_CASE("fnv1a64 matches reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hash_hex(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("header renders comments and echo round-trips") {
  MetadataHeader h;
  h.line("thzorient 1.0.0");
  h.kv("subcommand", "trace");
  h.config("mode", "reduced");
  h.config("A", "4");
  h.columns("tau,total");
  const std::string header = h.render();
  for (const char* needle :
       {"# thzorient 1.0.0", "# subcommand = trace", "# config: mode = reduced",
        "# columns: tau,total"}) {
    CHECK(header.find(needle) != std::string::npos);
  }

  const std::string file = header + "0,0.1\n0.5,0.2\n";
  const auto echo = parse_config_echo(file);
  REQUIRE(echo.size() == 2);
  CHECK(echo[0] == std::pair<std::string, std::string>{"mode", "reduced"});
  CHECK(echo[1] == std::pair<std::string, std::string>{"A", "4"});
  CHECK(data_section(file) == "0,0.1\n0.5,0.2\n");
}

TEST_CASE("run resolution enforces the exactly-one invariants") {
  RunConfig ok_reduced;
  ok_reduced.A = 4.0;
  ok_reduced.F = 2.0;
  ok_reduced.D = 1.0;
  ok_reduced.T_tilde = 50.0;
  const ResolvedRun r = resolve_run(ok_reduced);
  CHECK(!r.physical);
  CHECK(r.pulse.amplitude == 4.0);
  CHECK(r.T_tilde == 50.0);

  RunConfig missing = ok_reduced;
  missing.F.reset();
  CHECK_THROWS_AS(resolve_run(missing), std::invalid_argument);

  RunConfig mixed = ok_reduced;
  mixed.molecule = "OCS";
  CHECK_THROWS_AS(resolve_run(mixed), std::invalid_argument);

  RunConfig kelvin_with_reduced = ok_reduced;
  kelvin_with_reduced.T_K = 100.0;
  CHECK_THROWS_AS(resolve_run(kelvin_with_reduced), std::invalid_argument);

  RunConfig both_molecules;
  both_molecules.molecule = "OCS";
  both_molecules.B_cm1 = 2.0;
  CHECK_THROWS_AS(resolve_run(both_molecules), std::invalid_argument);

  RunConfig neither;
  CHECK_THROWS_AS(resolve_run(neither), std::invalid_argument);

  RunConfig unknown;
  unknown.molecule = "H2O";
  CHECK_THROWS_WITH_AS(resolve_run(unknown), doctest::Contains("OCS"),
                       std::invalid_argument);

  RunConfig ttilde_physical;
  ttilde_physical.molecule = "OCS";
  ttilde_physical.T_tilde = 50.0;
  CHECK_THROWS_AS(resolve_run(ttilde_physical), std::invalid_argument);

  RunConfig physical;
  physical.molecule = "OCS";
  physical.T_K = 150.0;
  const ResolvedRun p = resolve_run(physical);
  CHECK(p.physical);
  CHECK(p.pulse.amplitude == doctest::Approx(117.8497).epsilon(1e-5));
  CHECK(p.T_tilde == doctest::Approx(513.77).epsilon(1e-3));
}

TEST_CASE("svg output is well-formed XML") {
  std::vector<svg::Series> series(2);
  series[0] = {"total", "#4c72b0", {0.0, 1.0, 2.0}, {0.0, 0.5, -0.2}};
  series[1] = {"zero_T", "#c44e52", {0.0, 1.0, 2.0}, {0.1, 0.2, 0.3}, true};
  const std::string chart = svg::line_chart("t", "x", "y", series);
  CHECK(xml_well_formed(chart));
  CHECK(chart.find("<svg") != std::string::npos);

  const std::string heat = svg::heatmap_chart(
      "h", "B", "T", {0.1, 1.0, 10.0}, true, {0.0, 100.0, 200.0},
      {0.1, 0.2, 0.3, 0.4, std::nan(""), 0.6, 0.7, 0.8, 0.9});
  CHECK(xml_well_formed(heat));

  const std::string spec = svg::spectrum_chart(
      "s", {0.0, 5.0, 10.0, 15.0}, {0.0, 1.0, 0.5, 0.1}, {{2.0, 1.0}, {4.0, 0.5}});
  CHECK(xml_well_formed(spec));
}
