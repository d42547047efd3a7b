#include <cmath>
#include <string>

#include "test_support.hpp"
#include "wavefield/config.hpp"
#include "wavefield/run.hpp"

using namespace wavefield;

namespace {

const char* kMinimal = R"({
  "field": {"g": 1.0, "B": 0.5, "profile": "zero"},
  "eval": {"m": 1.0}
})";

std::string with_kernel_grid(const std::string& grid) {
  return R"({"field": {"g": 1.0, "B": 0.5, "profile": "zero"}, "eval": {"m": 1.0},
             "command": {"name": "kernel", "grid": )" +
         grid + "}}";
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.eval.cfg.g == 1.0);
  CHECK(cfg.eval.cfg.B == 0.5);
  CHECK(cfg.eval.cfg.profile.is_zero());
  CHECK_FALSE(cfg.eval.cfg.phi0.has_value());
  CHECK_FALSE(cfg.eval.cfg.profile_sign_toggle);
  CHECK(cfg.eval.m == 1.0);
  CHECK(cfg.eval.theta == doctest::Approx(std::acos(-1.0) / 4.0).epsilon(1e-16));
  CHECK((cfg.eval.x_a - LorentzVector(0, 0, 0, 0)).max_abs() == 0.0);
  CHECK((cfg.eval.x_b - LorentzVector(1, 0, 0, 0)).max_abs() == 0.0);
  CHECK((cfg.eval.pL - LorentzVector(0, 0, 0, 2)).max_abs() == 0.0);
  CHECK_FALSE(cfg.grid.has_value());
  CHECK(cfg.source.at("field").at("B") == 0.5);
}

TEST_CASE("missing or mistyped fields name their path") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::schema);
      return std::string(e.what());
    }
    FAIL("config was accepted");
    return std::string();
  };
  CHECK(message(R"({"field": {"g": 1.0, "profile": "zero"}, "eval": {"m": 1.0}})").find("field.B") !=
        std::string::npos);
  CHECK(message(R"({"field": {"g": 1.0, "B": "big", "profile": "zero"}, "eval": {"m": 1.0}})").find("field.B") !=
        std::string::npos);
  CHECK(message(R"({"field": {"g": 1.0, "B": 0.5, "profile": "zero", "C": 1}, "eval": {"m": 1.0}})")
            .find("field.C") != std::string::npos);
  CHECK(message(R"({"field": {"g": 1.0, "B": 0.5, "profile": "zero"}})").find("eval") != std::string::npos);
  CHECK(message(R"({"field": {"g": 1.0, "B": 0.5, "profile": "zero"}, "eval": {"m": 1.0, "x_a": [0, 1]}})")
            .find("eval.x_a") != std::string::npos);
  CHECK(message(R"({"field": {"g": 1.0, "B": 0.5, "profile": {"kind": "sine"}}, "eval": {"m": 1.0}})")
            .find("field.profile") != std::string::npos);
  CHECK(message("not json").size() > 0);
}

TEST_CASE("grid parsing") {
  SUBCASE("explicit values") {
    const RunConfig cfg = parse_config(with_kernel_grid(R"({"param": "e0", "values": [0.5, 1.0, 1.5, 2.0, 2.5]})"));
    REQUIRE(cfg.grid.has_value());
    CHECK(cfg.grid->param == "e0");
    CHECK(cfg.grid->values.size() == 5);
    CHECK(cfg.command == "kernel");
    const RunOutput out = run("kernel", cfg);
    CHECK(out.rows.size() == 5);
    CHECK(out.rows[2][0] == format_number(1.5));
  }
  SUBCASE("linspace") {
    const RunConfig cfg =
        parse_config(with_kernel_grid(R"({"param": "e0", "start": 0.1, "stop": 3.0, "count": 30})"));
    REQUIRE(cfg.grid->values.size() == 30);
    CHECK(cfg.grid->values.front() == 0.1);
    CHECK(cfg.grid->values.back() == 3.0);
    CHECK(cfg.grid->values[10] == doctest::Approx(1.1).epsilon(1e-15));
  }
  SUBCASE("non-monotone grid is a range error") {
    CHECK(test::error_kind_of([] {
            parse_config(with_kernel_grid(R"({"param": "e0", "values": [0.5, 1.5, 1.0]})"));
          }) == ErrorKind::range);
    CHECK(test::error_kind_of([] {
            parse_config(with_kernel_grid(R"({"param": "e0", "values": [0.5, 0.5]})"));
          }) == ErrorKind::range);
  }
  SUBCASE("parameter must suit the command") {
    const auto kind = test::error_kind_of(
        [] { parse_config(with_kernel_grid(R"({"param": "theta", "values": [0.3, 0.5]})")); });
    CHECK((kind == ErrorKind::schema || kind == ErrorKind::range));
  }
}

TEST_CASE("grid values rewrite the addressed field") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(with_grid_value(cfg, "B", 2.0).eval.cfg.B == 2.0);
  CHECK(with_grid_value(cfg, "m", 0.3).eval.m == 0.3);
  CHECK(with_grid_value(cfg, "x_b.3", 0.7).eval.x_b[3] == cplx(0.7, 0.0));
  CHECK(with_grid_value(cfg, "pL.2", 0.4).eval.pL[2] == cplx(0.4, 0.0));
  CHECK(with_grid_value(cfg, "e0", 0.25).e0 == 0.25);
  CHECK(cfg.eval.cfg.B == 0.5);
}

TEST_CASE("every command has grid parameters") {
  for (const auto& name : command_names()) {
    if (name == "identities" || name == "verify") continue;
    CHECK_FALSE(grid_params(name).empty());
  }
  CHECK(grid_params("kernel") == std::vector<std::string>{"e0"});
  CHECK(grid_params("K") == std::vector<std::string>{"phi"});
}
