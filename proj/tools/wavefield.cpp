#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavefield/errors.hpp"
#include "wavefield/run.hpp"
#include "wavefield/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dirac Green function in a plane wave plus constant magnetic field"};
  std::string command;
  std::string config_path;
  std::string out_path;
  double angle = 0.0;
  bool toggle = false;

  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(wavefield::command_names()));
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_path, "CSV output path (sidecar written to <out>.json)")->required();
  auto* angle_opt = app.add_option("--angle", angle, "Proper-time contour angle theta in (0, pi/2)");
  app.add_flag("--profile-sign-toggle", toggle, "Flip the sign of the exponential inside K(phi)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    wavefield::RunConfig cfg = wavefield::load_config(config_path);
    if (!cfg.command.empty() && cfg.command != command) {
      std::cerr << "note: config names command '" << cfg.command << "', running '" << command << "'\n";
    }
    if (angle_opt->count() > 0) cfg.eval.theta = angle;
    if (toggle) cfg.eval.cfg.profile_sign_toggle = true;

    const wavefield::RunOutput out = wavefield::run(command, cfg);
    wavefield::write_outputs(out, out_path);
    if (command == "verify") {
      for (const auto& c : out.sidecar.at("report").at("criteria")) {
        wavefield::CriterionResult r;
        r.id = c.at("id");
        r.name = c.at("name");
        r.pass = c.at("pass");
        r.measured = c.at("measured");
        r.tolerance = c.at("tolerance");
        r.detail = c.at("detail");
        std::cout << wavefield::format_line(r) << '\n';
      }
    }
    return out.exit_code;
  } catch (const wavefield::Error& e) {
    std::cerr << e.what() << '\n';
    return wavefield::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
