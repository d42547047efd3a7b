#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "test_support.hpp"
#include "wavefield/config.hpp"
#include "wavefield/run.hpp"

using namespace wavefield;
namespace fs = std::filesystem;

namespace {

// Compact context: the weak-field correction coefficient is small here.
const char* kLimitsConfig = R"({
  "field": {"g": 1.0, "B": 1e-4, "profile": "zero"},
  "eval": {"m": 1.0, "x_b": [0.2, 0.1, 0.3, -0.1], "pL": [0, 0, 0, 4.0]},
  "command": {"name": "limits"}
})";

const char* kGfConfig = R"({
  "field": {"g": 1.0, "B": 0.8, "profile": {"kind": "circular", "amplitude": 0.3, "frequency": 1.0}},
  "eval": {"m": 1.0, "x_a": [0.1, -0.2, 0, 0], "x_b": [0.7, 0.4, 0.3, -0.5], "pL": [0, 0, 0.5, 1.8]},
  "command": {"name": "gf", "grid": {"param": "B", "values": [0.4, 0.8]}}
})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("wavefield_test_run_" + std::to_string(std::rand()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

int cli(const std::string& args) {
  const std::string cmd = std::string(WAVEFIELD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("kernel grid flags the caustic window") {
  const RunConfig cfg = parse_config(R"({
    "field": {"g": 1.0, "B": 2.5, "profile": "zero"},
    "eval": {"m": 1.0, "x_a": [0.1, 0.0, 0, 0], "x_b": [0.6, 0.3, 0, 0]},
    "command": {"name": "kernel", "grid": {"param": "e0", "start": 0.1, "stop": 3.0, "count": 59}}
  })");
  const RunOutput out = run("kernel", cfg);
  REQUIRE(out.rows.size() == 59);
  CHECK(out.columns.back() == "near_singularity");
  const double two_pi = 2.0 * std::acos(-1.0);
  int flagged = 0;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const double e0 = cfg.grid->values[i];
    const bool expect = std::abs(e0 * 2.5 - two_pi) < 0.1;
    CHECK(out.rows[i].back() == (expect ? "1" : "0"));
    flagged += expect;
    CHECK(std::isfinite(std::stod(out.rows[i][1])));
  }
  CHECK(flagged > 0);
}

TEST_CASE("sidecar carries the convention ledger") {
  const RunConfig cfg = parse_config(kLimitsConfig);
  const RunOutput out = run("limits", cfg);
  const auto& side = out.sidecar;
  CHECK(side.at("tool") == "wavefield");
  CHECK(side.at("version") == kToolVersion);
  CHECK(side.at("csv_schema_version") == kCsvSchemaVersion);
  CHECK(side.at("command") == "limits");
  CHECK(side.at("config") == cfg.source);
  CHECK(side.at("exit_code") == 0);
  const auto& ledger = side.at("conventions");
  for (const char* key : {"metric", "wave_vector", "polarization", "contour", "contour_angle", "phi0", "phi0_rule",
                          "normalization", "profile_sign_toggle", "Y0", "csv_schema_version"})
    CHECK(ledger.contains(key));
  CHECK(ledger_mismatches(ledger).empty());

  auto tampered = ledger;
  tampered["metric"] = nlohmann::json::array({-1, 1, 1, 1});
  const auto bad = ledger_mismatches(tampered);
  REQUIRE(bad.size() == 1);
  CHECK(bad.front() == "metric");
  tampered = ledger;
  tampered["normalization"] = "1/(2pi)^2";
  CHECK_FALSE(ledger_mismatches(tampered).empty());
}

TEST_CASE("limits command reproduces the free propagator") {
  const RunOutput out = run("limits", parse_config(kLimitsConfig));
  REQUIRE(out.rows.size() == 1);
  CHECK(out.columns[0] == "B");
  CHECK(std::stod(out.rows[0][3]) <= 1e-5);
  CHECK(std::stod(out.rows[0][4]) <= 1e-5);
}

TEST_CASE("csv output is full precision and deterministic") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  const RunConfig cfg = parse_config(kGfConfig);
  const RunOutput a = run("gf", cfg);
  const RunOutput b = run("gf", cfg);
  REQUIRE(a.rows.size() == 2);
  CHECK(a.columns.size() == 1 + 32 + 5);
  CHECK(a.csv() == b.csv());
  CHECK(a.sidecar.dump() == b.sidecar.dump());
  const std::string header = a.csv().substr(0, a.csv().find('\n'));
  CHECK(header.rfind("B,", 0) == 0);
  for (const auto& row : a.rows) CHECK(row.size() == a.columns.size());
}

TEST_CASE("write_outputs produces csv and json sidecar") {
  Scratch s;
  const RunOutput out = run("limits", parse_config(kLimitsConfig));
  const fs::path p = s.dir / "limits.csv";
  write_outputs(out, p.string());
  CHECK(read_file(p) == out.csv());
  const auto side = nlohmann::json::parse(read_file(p.string() + ".json"));
  CHECK(side == out.sidecar);
}

TEST_CASE("cli exit codes") {
  Scratch s;
  const std::string out = (s.dir / "out.csv").string();

  SUBCASE("ok") {
    const auto cfg = s.write("ok.json", kLimitsConfig);
    CHECK(cli("limits --config " + cfg.string() + " --out " + out) == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(out + ".json"));
    const auto id = s.write("id.json", kLimitsConfig);
    CHECK(cli("identities --config " + id.string() + " --out " + out) == 0);
  }
  SUBCASE("schema") {
    const auto cfg = s.write("bad.json", R"({"field": {"g": 1.0, "profile": "zero"}, "eval": {"m": 1.0}})");
    CHECK(cli("gf --config " + cfg.string() + " --out " + out) == 2);
    CHECK(cli("gf --config " + (s.dir / "missing.json").string() + " --out " + out) == 2);
    CHECK(cli("nonsense --config " + cfg.string() + " --out " + out) == 2);
    const auto ok = s.write("ok.json", kLimitsConfig);
    CHECK(cli("gf --config " + ok.string() + " --out " + out + " --angle 2.0") == 2);
  }
  SUBCASE("numeric singularity") {
    const double e0 = 2.0 * std::acos(-1.0) / 2.5;
    char buf[512];
    std::snprintf(buf, sizeof buf, R"({"field": {"g": 1.0, "B": 2.5, "profile": "zero"},
      "eval": {"m": 1.0, "x_b": [0.5, 0.3, 0, 0], "e0": %.17g}})",
                  e0);
    const auto cfg = s.write("caustic.json", buf);
    CHECK(cli("kernel --config " + cfg.string() + " --out " + out) == 3);
  }
  SUBCASE("quadrature failure") {
    const auto cfg = s.write("cap.json", R"({
      "field": {"g": 1.0, "B": 0.8, "profile": {"kind": "circular", "amplitude": 0.3, "frequency": 1.0}},
      "eval": {"m": 1.0, "x_b": [0.7, 0.4, 0.3, -0.5], "pL": [0, 0, 0.5, 1.8],
               "abs_tol": 1e-15, "rel_tol": 1e-15, "max_nodes": 15}})");
    CHECK(cli("gf --config " + cfg.string() + " --out " + out) == 4);
  }
  SUBCASE("verify") {
    const auto cfg = s.write("v.json", kLimitsConfig);
    CHECK(cli("verify --config " + cfg.string() + " --out " + out) == 0);
    const auto side = nlohmann::json::parse(read_file(out + ".json"));
    CHECK(side.at("report").at("criteria").size() == 12);
  }
}
