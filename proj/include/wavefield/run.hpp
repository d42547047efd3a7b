#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wavefield/config.hpp"

namespace wavefield {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct RunOutput {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json sidecar;
  int exit_code = 0;

  std::string csv() const;
};

const std::vector<std::string>& command_names();

// Shortest round-trip-safe text: 17 significant digits.
std::string format_number(double x);

// Convention ledger written into every sidecar.
nlohmann::json convention_ledger(const RunConfig& cfg);

// Names of ledger entries that disagree with the compiled constants.
std::vector<std::string> ledger_mismatches(const nlohmann::json& ledger);

// Evaluates a command. Library errors propagate as wavefield::Error.
RunOutput run(const std::string& command, const RunConfig& cfg);

// Writes <out> (CSV) and <out>.json (sidecar).
void write_outputs(const RunOutput& out, const std::string& path);

}  // namespace wavefield
