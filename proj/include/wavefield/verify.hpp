#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavefield {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;   // worst observed discrepancy
  double tolerance = 0.0;  // threshold it is compared with
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
};

// Runs acceptance criteria 1..12. Fixed seeds, no timing data: repeated
// calls return identical results.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt = {});

std::string format_line(const CriterionResult& r);
nlohmann::json report_json(const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace wavefield
