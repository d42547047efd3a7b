#pragma once

#include "wavefield/field.hpp"
#include "wavefield/quadrature.hpp"

namespace wavefield {

// phi(tau) = phi_a - e0 (k.pL) tau
struct PhiPath {
  double phi_a = 0.0;
  double slope = 0.0;

  static PhiPath make(double e0, const LorentzVector& pL, double phi_a);
  double operator()(double tau) const { return phi_a + slope * tau; }
};

double phi_path(double tau, double e0, const LorentzVector& pL, double phi_a);

// Spectral projectors of the magnetic map: P_eps x = eps (eps*.x),
// P_eps* x = eps* (eps.x), P_long = 1 - P_eps - P_eps*.
Matrix4C projector_eps();
Matrix4C projector_eps_star();
Matrix4C projector_transverse();

// exp(Q tau) with Q = e0 g f; w = e0 g B is the rotation rate.
Matrix4C exp_Q(double tau, double e0, const FieldConfig& cfg);

struct PathContext {
  double e0 = 1.0;
  FieldConfig cfg;
  PhiPath path;
  QuadratureOptions quad;
};

PathContext make_path_context(double e0, const FieldConfig& cfg, const LorentzVector& pL, double phi_a,
                              const QuadratureOptions& quad = {});

// Drift path solving -Ydot/e0 + g f Y - g A^p(phi(tau)) = 0:
//   Y(tau) = e^{Q tau} [Y0 - e0 g int_0^tau e^{-Q s} A^p(phi(s)) ds]
LorentzVector Y_path(double tau, const LorentzVector& Y0, const PathContext& ctx);

// Same drift, parameterized by the phase itself. Dividing the ODE by
// dphi/dtau = -e0 (k.pL) removes e0:
//   dY/dphi = -(g/kp) (f Y - A^p(phi)),  Y(phi_a) = Y0.
struct PhaseDrift {
  FieldConfig cfg;
  double kp = 1.0;  // k.pL
  double phi_a = 0.0;
  LorentzVector Y0;
  QuadratureOptions quad;

  LorentzVector at(double phi) const;
  // dY/dphi from the ODE right-hand side.
  LorentzVector slope(double phi, const LorentzVector& Y) const;
};

// Classical transverse spin solution as linear maps in (Gamma^T, eta_a):
//   psi_c^T(tau) = gamma_coeff(tau) Gamma^T + eta_coeff(tau) eta_a
struct SpinCoefficientMap {
  Matrix4C gamma_coeff;
  LorentzVector eta_coeff;
};

// Throws ResonantQ when cos(e0 g B / 2) vanishes (1 + e^Q singular).
SpinCoefficientMap psi_classical(double tau, const PathContext& ctx);

// eta_a = k.Gamma^L / 2
cplx eta_a(const LorentzVector& Gamma);

// Longitudinal endpoint solutions with dp = p_eta(a) - p_eta(b) as an opaque
// coefficient: psi^L(1) = (i/4) k dp + Gamma^L/2, psi^L(0) = -(i/4) k dp + Gamma^L/2.
LorentzVector psi_longitudinal_final(const LorentzVector& Gamma, cplx dp);
LorentzVector psi_longitudinal_initial(const LorentzVector& Gamma, cplx dp);

}  // namespace wavefield
