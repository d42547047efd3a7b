#include "wavefield/kernels.hpp"

#include <cmath>
#include <numbers>

#include "wavefield/errors.hpp"

namespace wavefield {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

}  // namespace

bool near_caustic(double e0, double g, double B) {
  const double w = e0 * g * B;
  const double n = std::round(w / (2.0 * kPi));
  if (n == 0.0) return false;
  return std::abs(w - 2.0 * kPi * n) < kNearCausticWindow;
}

cplx schwinger_kernel(cplx e0, const TransverseEndpoints& ep, double g, double B) {
  const double d1 = ep.xb1 - ep.xa1;
  const double d2 = ep.xb2 - ep.xa2;
  const double dist2 = d1 * d1 + d2 * d2;
  const double gB = g * B;
  if (e0 == 0.0) throw Error(ErrorKind::kernel_singularity, "e0 = 0");
  if (gB == 0.0) {
    return kI / (2.0 * kPi * e0) * std::exp(-kI * dist2 / (2.0 * e0));
  }
  const cplx half = 0.5 * e0 * gB;
  const cplx s = std::sin(half);
  // Small |sin| next to e0 = 0 is the free short-time behaviour, not a caustic.
  const bool origin_branch = std::round(half.real() / kPi) == 0.0;
  if (std::abs(s) < kCausticThreshold && !origin_branch) {
    throw Error(ErrorKind::kernel_singularity,
                "sin(e0 g B / 2) vanishes at e0 = (" + std::to_string(e0.real()) + ", " + std::to_string(e0.imag()) +
                    ")");
  }
  const cplx cot = std::cos(half) / s;
  const double cross = ep.xb1 * ep.xa2 - ep.xb2 * ep.xa1;
  const cplx exponent = kI * (0.5 * gB) * (cross - 0.5 * cot * dist2);
  return kI * gB / (4.0 * kPi * s) * std::exp(exponent);
}

cplx schwinger_kernel(cplx e0, const TransverseEndpoints& ep, const FieldConfig& cfg) {
  return schwinger_kernel(e0, ep, cfg.g, cfg.B);
}

cplx spin_determinant(cplx e0, double g, double B) { return std::cos(0.5 * e0 * g * B); }

cplx spin_determinant(cplx e0, const FieldConfig& cfg) { return spin_determinant(e0, cfg.g, cfg.B); }

KValue K_function(double phi, const LorentzVector& pL, const FieldConfig& cfg, double phi0,
                  const QuadratureOptions& quad) {
  KValue out{0.0, {}};
  if (cfg.profile.is_zero()) return out;
  const double kp = dot(wave_vector(), pL).real();
  if (kp == 0.0) throw Error(ErrorKind::division_by_zero, "K(phi) needs k.pL != 0");

  const double beta = cfg.g * cfg.B / kp;
  const double sign = cfg.profile_sign_toggle ? -1.0 : 1.0;
  const LorentzVector e = epsilon();
  auto integrand = [&](double s) {
    return std::exp(kI * (sign * beta * s)) * dot(e, cfg.profile.derivative(s));
  };
  const auto r = integrate<cplx>(integrand, phi0, phi, quad);
  out.value = cfg.g / (2.0 * kp) * std::exp(kI * (beta * phi)) * r.value;
  out.diagnostics.error_estimate = std::abs(cfg.g / (2.0 * kp)) * r.error;
  out.diagnostics.nodes = r.nodes;
  return out;
}

cplx longitudinal_phase(cplx e0, const LorentzVector& pL, const LorentzVector& x_a, const LorentzVector& x_b,
                        double m) {
  const LorentzVector dx = longitudinal_part(x_b - x_a);
  return kI * dot(pL, dx) + kI * (0.5 * e0) * (dot(pL, pL) - m * m);
}

CrossPhase cross_phase(const CrossPhaseInput& in) {
  CrossPhase out;
  out.phi_a = dot(wave_vector(), in.x_a).real();
  out.phi_b = dot(wave_vector(), in.x_b).real();

  const LorentzVector xa = transverse_project(in.x_a);
  const LorentzVector xb = transverse_project(in.x_b);
  if (in.cfg.profile.is_zero() && in.Y0.max_abs() == 0.0) {
    out.exponent = 0.0;
    out.X = {xa[0].real(), xa[1].real(), xb[0].real(), xb[1].real()};
    return out;
  }

  const double kp = dot(wave_vector(), in.pL).real();
  if (kp == 0.0) throw Error(ErrorKind::division_by_zero, "cross phase needs k.pL != 0");

  PhaseDrift drift{in.cfg, kp, out.phi_a, in.Y0, in.quad};
  out.Y_a = drift.at(out.phi_a);
  out.Y_b = drift.at(out.phi_b);

  cplx action = 0.0;
  if (!in.cfg.profile.is_zero() && out.phi_b != out.phi_a) {
    // The inner drift integral is recomputed at every outer node.
    auto integrand = [&](double phi) {
      const LorentzVector Y = drift.at(phi);
      return dot(in.cfg.profile.potential(phi), drift.slope(phi, Y));
    };
    const auto r = integrate<cplx>(integrand, out.phi_a, out.phi_b, in.quad);
    action = r.value;
    out.diagnostics.error_estimate = 0.5 * std::abs(in.cfg.g) * r.error;
    out.diagnostics.nodes = r.nodes;
  }

  const Matrix4C f = in.cfg.tensor().as_map();
  const LorentzVector Xa = xa - out.Y_a;
  const LorentzVector Xb = xb - out.Y_b;
  const cplx boundary = dot(Xb, f * out.Y_b) - dot(Xa, f * out.Y_a);
  out.exponent = -kI * (0.5 * in.cfg.g) * (action + boundary);
  out.X = {Xa[0].real(), Xa[1].real(), Xb[0].real(), Xb[1].real()};
  return out;
}

}  // namespace wavefield
