#include "wavefield/errors.hpp"

namespace wavefield {

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::schema: return "SchemaError";
    case ErrorKind::range: return "RangeError";
    case ErrorKind::invalid_profile: return "InvalidProfile";
    case ErrorKind::pole: return "PoleError";
    case ErrorKind::kernel_singularity: return "KernelSingularity";
    case ErrorKind::resonant_q: return "ResonantQ";
    case ErrorKind::division_by_zero: return "DivisionByZero";
    case ErrorKind::contour_caustic: return "ContourCaustic";
    case ErrorKind::singular_form: return "SingularForm";
    case ErrorKind::resonant_denominator: return "ResonantDenominator";
    case ErrorKind::quadrature_failure: return "QuadratureFailure";
    case ErrorKind::step_calibration: return "StepCalibrationFailure";
    case ErrorKind::verification: return "VerificationFailure";
  }
  return "Error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::schema:
    case ErrorKind::range:
    case ErrorKind::invalid_profile:
      return 2;
    case ErrorKind::pole:
    case ErrorKind::kernel_singularity:
    case ErrorKind::resonant_q:
    case ErrorKind::division_by_zero:
    case ErrorKind::contour_caustic:
    case ErrorKind::singular_form:
    case ErrorKind::resonant_denominator:
      return 3;
    case ErrorKind::quadrature_failure:
    case ErrorKind::step_calibration:
      return 4;
    case ErrorKind::verification:
      return 5;
  }
  return 1;
}

}  // namespace wavefield
