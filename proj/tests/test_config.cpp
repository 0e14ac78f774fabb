#include "doctest.h"

#include "braggsim/config.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/scenario.hpp"
#include "braggsim/transfer_matrix.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace braggsim;
namespace fs = std::filesystem;

namespace {

const std::string kPaper = std::string(BRAGGSIM_SOURCE_DIR) + "/configs/paper.json";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, "");
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("braggsim_test_" + name);
  fs::remove_all(d);
  return d;
}

} // namespace

TEST_CASE("paper config") {
  const ScenarioConfig c = load_config(kPaper);
  REQUIRE(c.is_bragg());
  const GratingSpec g = std::get<BraggConfig>(c.structure).to_spec();
  CHECK(g.period == doctest::Approx(320e-9));
  CHECK(g.total_length() == doctest::Approx(1.6e-3));
  CHECK(c.comparator.has_value());
  CHECK(c.window(WindowRole::Idler) != nullptr);
  CHECK(c.window(WindowRole::Signal) == nullptr);
  CHECK(c.params.to_params().coupling_loss_db.value() == 5.0);
}

TEST_CASE("config round-trips losslessly") {
  SUBCASE("paper") {
    const ScenarioConfig c = load_config(kPaper);
    const std::string text = serialize_config(c);
    const ScenarioConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
  SUBCASE("ring structure with every optional field") {
    ScenarioConfig c;
    RingConfig r;
    r.q_idler = 12345.678901234567;
    r.pulse_duration_ps = 0.1 + 0.2;
    c.structure = r;
    c.params.coupling_loss_db = 3.3;
    c.params.gvd_beta2_ps2_per_km = -1.1e3;
    c.pulse.shape = PulseShape::Gaussian;
    c.pulse.center_wavelength_nm = 1534.55;
    c.windows = {WindowConfig{WindowRole::Signal, 1544.27, 2.5}, WindowConfig{WindowRole::Idler, 1524.94, 2.5}};
    c.sweep.spectrum.center_nm = 1545.0;
    c.sweep.contrast.compare_rejection_db.reset();
    c.sweep.contrast.delta_n = {2e-3 / 3.0};
    c.output.format = OutputFormat::Json;
    c.output.dir = "elsewhere";
    const ScenarioConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
  }
}

TEST_CASE("config errors carry path and line") {
  SUBCASE("unknown field") {
    const auto e = config_error("{\n  \"structure\": {\"type\": \"bragg\",\n    \"period\": 320}\n}");
    CHECK(e.path() == "/structure/period");
    CHECK(e.line() == 3);
  }
  SUBCASE("wrong type") {
    const auto e = config_error("{\"structure\": {\"type\": \"bragg\"},\n\"pulse\": {\n \"duration_ps\": \"long\"}}");
    CHECK(e.path() == "/pulse/duration_ps");
    CHECK(e.line() == 3);
  }
  SUBCASE("missing structure") { CHECK(config_error("{}").path() == "/"); }
  SUBCASE("bad enum") {
    const auto e = config_error("{\"structure\": {\"type\": \"bragg\"}, \"output\": {\"format\": \"xml\"}}");
    CHECK(e.path() == "/output/format");
    CHECK(std::string(e.what()).find("csv") != std::string::npos);
  }
  SUBCASE("array element") {
    const auto e = config_error(
        "{\"structure\": {\"type\": \"bragg\"},\n\"sweep\": {\"contrast\": {\"delta_n\": [\n0.001,\n0.5]}}}");
    CHECK(e.path() == "/sweep/contrast/delta_n/1");
    CHECK(e.line() == 4);
  }
  SUBCASE("domain invariant") {
    const auto e = config_error("{\"structure\": {\"type\": \"bragg\", \"duty_cycle\": 1.5}}");
    CHECK(e.path() == "/structure");
  }
  SUBCASE("malformed JSON") {
    const auto e = config_error("{\n\"structure\": {\n\"type\": \"bragg\",,\n}}");
    CHECK(e.line() == 3);
  }
  SUBCASE("integer fields") {
    CHECK(config_error("{\"structure\": {\"type\": \"bragg\", \"n_periods\": 20.5}}").path() == "/structure/n_periods");
  }
}

TEST_CASE("scenario outputs are deterministic") {
  const ScenarioConfig c = load_config(kPaper);
  RunOptions o;
  o.points = 301;
  const auto a = run_scenario(c, Subcommand::Spectrum, o);
  const auto b = run_scenario(c, Subcommand::Spectrum, o);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].name == b.files[i].name);
    CHECK(a.files[i].content == b.files[i].content);
  }
  o.format = OutputFormat::Json;
  const auto j = run_scenario(c, Subcommand::Spectrum, o);
  REQUIRE(j.files.size() == 1);
  CHECK(j.files[0].name == "spectrum.json");
}

TEST_CASE("design subcommand") {
  const ScenarioConfig c = load_config(kPaper);
  RunOptions o;
  o.rejection_db = 20.0;
  const auto out = run_scenario(c, Subcommand::Design, o);
  REQUIRE_FALSE(out.messages.empty());
  CHECK(out.messages.back() == "N=" + std::to_string(design_periods(20.0, 2.414, 3.4985e-3)));
  o.rejection_db = 5.0;
  CHECK_THROWS_AS(run_scenario(c, Subcommand::Design, o), DomainError);
}

TEST_CASE("file runner exit codes") {
  SUBCASE("missing config names the path") {
    RunRequest r;
    r.config_path = "/nonexistent/dir/cfg.json";
    r.subcommand = Subcommand::Design;
    const auto st = run_scenario_files(r);
    CHECK(st.exit_code == kExitIo);
    CHECK(st.error.find("/nonexistent/dir/cfg.json") != std::string::npos);
  }
  SUBCASE("config error") {
    const fs::path d = temp_dir("cfgerr");
    fs::create_directories(d);
    std::ofstream(d / "bad.json") << "{\"structure\": {\"type\": \"prism\"}}";
    RunRequest r;
    r.config_path = (d / "bad.json").string();
    const auto st = run_scenario_files(r);
    CHECK(st.exit_code == kExitConfig);
    CHECK(st.error.find("/structure/type") != std::string::npos);
  }
  SUBCASE("ring structure cannot run a Bragg subcommand") {
    const fs::path d = temp_dir("ring");
    fs::create_directories(d);
    std::ofstream(d / "ring.json") << "{\"structure\": {\"type\": \"ring\"}}";
    RunRequest r;
    r.config_path = (d / "ring.json").string();
    r.subcommand = Subcommand::Spectrum;
    r.out_dir = (d / "out").string();
    CHECK(run_scenario_files(r).exit_code == kExitDomain);
  }
  SUBCASE("overwrite needs force; data files repeat byte for byte") {
    const fs::path d = temp_dir("force");
    RunRequest r;
    r.config_path = kPaper;
    r.subcommand = Subcommand::Design;
    r.out_dir = d.string();
    const auto first = run_scenario_files(r);
    REQUIRE(first.exit_code == kExitOk);
    CHECK(fs::exists(d / "design.csv"));
    CHECK(fs::exists(d / "metadata.json"));
    const std::string before = slurp(d / "design.csv");
    const auto second = run_scenario_files(r);
    CHECK(second.exit_code == kExitIo);
    CHECK(second.error.find("--force") != std::string::npos);
    r.force = true;
    CHECK(run_scenario_files(r).exit_code == kExitOk);
    CHECK(slurp(d / "design.csv") == before);
  }
}
