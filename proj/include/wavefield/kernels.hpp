#pragma once

#include "wavefield/classical.hpp"
#include "wavefield/field.hpp"
#include "wavefield/quadrature.hpp"

namespace wavefield {

struct TransverseEndpoints {
  double xa1 = 0.0;
  double xa2 = 0.0;
  double xb1 = 0.0;
  double xb2 = 0.0;
};

struct KernelDiagnostics {
  double error_estimate = 0.0;
  std::size_t nodes = 0;
  bool near_singularity = false;
};

// |sin(e0 g B / 2)| below this is treated as a proper-time caustic.
inline constexpr double kCausticThreshold = 1e-10;

// Window (in units of e0 g B) around 2 pi n, n != 0, flagged as near a caustic.
inline constexpr double kNearCausticWindow = 0.1;

bool near_caustic(double e0, double g, double B);

// Transverse Gaussian of the scalar particle in the constant field:
//   igB / (4 pi sin(e0gB/2)) exp{ i gB/2 [ (Xb1 Xa2 - Xb2 Xa1)
//                                      - cot(e0gB/2)/2 |Xb - Xa|^2 ] }
// B = 0 (or g = 0) returns the free limit i/(2 pi e0) exp(-i |dX|^2 / (2 e0)).
// Accepts complex e0 for the rotated proper-time contour.
cplx schwinger_kernel(cplx e0, const TransverseEndpoints& ep, double g, double B);
cplx schwinger_kernel(cplx e0, const TransverseEndpoints& ep, const FieldConfig& cfg);

// cosh(i e0 g B / 2) = cos(e0 g B / 2)
cplx spin_determinant(cplx e0, double g, double B);
cplx spin_determinant(cplx e0, const FieldConfig& cfg);

struct KValue {
  cplx value;
  KernelDiagnostics diagnostics;

  cplx conj() const { return std::conj(value); }
};

// K(phi) = g/(2 kp) exp(i gB phi / kp) int_phi0^phi exp(i s gB phi'/kp) eps.A'^p(phi') dphi'
// with kp = k.pL and s = +1 (s = -1 under cfg.profile_sign_toggle).
// Throws DivisionByZero for kp = 0 with a non-zero profile.
KValue K_function(double phi, const LorentzVector& pL, const FieldConfig& cfg, double phi0,
                  const QuadratureOptions& quad = {});

// i pL.(x_b^L - x_a^L) + i e0/2 (pL.pL - m^2); the exponent, not its exponential.
cplx longitudinal_phase(cplx e0, const LorentzVector& pL, const LorentzVector& x_a, const LorentzVector& x_b,
                        double m);

struct CrossPhaseInput {
  FieldConfig cfg;
  LorentzVector pL;
  LorentzVector x_a;
  LorentzVector x_b;
  LorentzVector Y0;
  QuadratureOptions quad;
};

struct CrossPhase {
  cplx exponent;
  // X^T = x^T - Y^T at both endpoints, real transverse slots.
  TransverseEndpoints X;
  LorentzVector Y_a;
  LorentzVector Y_b;
  double phi_a = 0.0;
  double phi_b = 0.0;
  KernelDiagnostics diagnostics;
};

// -i g/2 ( int_phi_a^phi_b A^p(phi) . dY^T/dphi dphi + X^T . f Y^T |_phi_a^phi_b )
// with phi_a = k.x_a, phi_b = k.x_b and Y^T the phase-parameterized drift.
CrossPhase cross_phase(const CrossPhaseInput& in);

}  // namespace wavefield
