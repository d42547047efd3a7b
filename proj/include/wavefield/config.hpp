#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavefield/green.hpp"

namespace wavefield {

struct Grid {
  std::string param;
  std::vector<double> values;
};

struct RunConfig {
  EvalContext eval;  // eval.cfg carries the field block
  // Scalar evaluation points used when no grid is given.
  double e0 = 1.0;
  double phi = 0.0;
  std::optional<Grid> grid;
  std::string command;  // optional in the file; the CLI argument wins
  std::string output;
  nlohmann::json source;  // the document as read, echoed into sidecars
};

// Parses and validates a JSON config document.
// Throws SchemaError (with the offending field path) or RangeError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Grid parameters accepted by each command.
std::vector<std::string> grid_params(const std::string& command);

// Applies one grid value to a copy of the config.
RunConfig with_grid_value(const RunConfig& cfg, const std::string& param, double value);

}  // namespace wavefield
