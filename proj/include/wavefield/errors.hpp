#pragma once

#include <stdexcept>
#include <string>

namespace wavefield {

enum class ErrorKind {
  schema,
  range,
  invalid_profile,
  pole,
  kernel_singularity,
  resonant_q,
  division_by_zero,
  contour_caustic,
  singular_form,
  resonant_denominator,
  quadrature_failure,
  step_calibration,
  verification,
};

// Every failure raised by the library carries a kind; the CLI maps kinds
// onto its stable exit-code table.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

// 0 ok, 2 schema, 3 numeric singularity, 4 quadrature failure, 5 verification.
int exit_code(ErrorKind kind);

}  // namespace wavefield
