#include "wavefield/classical.hpp"

#include <cmath>

#include "wavefield/errors.hpp"

namespace wavefield {

namespace {

const cplx kI(0.0, 1.0);

// int_lo^hi exp(i w s) h(s) ds for a complex scalar h.
template <class H>
cplx phased_integral(double w, double lo, double hi, const H& h, const QuadratureOptions& quad) {
  auto f = [&](double s) { return std::exp(kI * (w * s)) * h(s); };
  return integrate<cplx>(f, lo, hi, quad).value;
}

}  // namespace

PhiPath PhiPath::make(double e0, const LorentzVector& pL, double phi_a) {
  return {phi_a, -e0 * dot(wave_vector(), pL).real()};
}

double phi_path(double tau, double e0, const LorentzVector& pL, double phi_a) {
  return PhiPath::make(e0, pL, phi_a)(tau);
}

Matrix4C projector_eps() { return outer_dot(epsilon(), epsilon_star()); }

Matrix4C projector_eps_star() { return outer_dot(epsilon_star(), epsilon()); }

Matrix4C projector_transverse() { return projector_eps() + projector_eps_star(); }

Matrix4C exp_Q(double tau, double e0, const FieldConfig& cfg) {
  const double w = e0 * cfg.g * cfg.B;
  const Matrix4C pe = projector_eps();
  const Matrix4C pes = projector_eps_star();
  return pe * std::exp(kI * (w * tau)) + pes * std::exp(-kI * (w * tau)) + (Matrix4C::Identity() - pe - pes);
}

PathContext make_path_context(double e0, const FieldConfig& cfg, const LorentzVector& pL, double phi_a,
                              const QuadratureOptions& quad) {
  return {e0, cfg, PhiPath::make(e0, pL, phi_a), quad};
}

LorentzVector Y_path(double tau, const LorentzVector& Y0, const PathContext& ctx) {
  const LorentzVector e = epsilon();
  const LorentzVector es = epsilon_star();
  const double w = ctx.e0 * ctx.cfg.g * ctx.cfg.B;
  cplx yp = dot(es, Y0);
  cplx ym = dot(e, Y0);
  if (!ctx.cfg.profile.is_zero() && tau != 0.0) {
    const auto& prof = ctx.cfg.profile;
    const double coupling = ctx.e0 * ctx.cfg.g;
    auto ap = [&](double s) { return dot(es, prof.potential(ctx.path(s))); };
    auto am = [&](double s) { return dot(e, prof.potential(ctx.path(s))); };
    yp -= coupling * phased_integral(-w, 0.0, tau, ap, ctx.quad);
    ym -= coupling * phased_integral(w, 0.0, tau, am, ctx.quad);
  }
  return (std::exp(kI * (w * tau)) * yp) * e + (std::exp(-kI * (w * tau)) * ym) * es;
}

LorentzVector PhaseDrift::at(double phi) const {
  const LorentzVector e = epsilon();
  const LorentzVector es = epsilon_star();
  const double beta = cfg.g * cfg.B / kp;
  cplx yp = dot(es, Y0);
  cplx ym = dot(e, Y0);
  if (!cfg.profile.is_zero() && phi != phi_a) {
    const auto& prof = cfg.profile;
    auto ap = [&](double s) { return dot(es, prof.potential(s)); };
    auto am = [&](double s) { return dot(e, prof.potential(s)); };
    // Integrate in the shifted variable s - phi_a so the phases stay small.
    auto shifted_p = [&](double u) { return ap(u + phi_a); };
    auto shifted_m = [&](double u) { return am(u + phi_a); };
    const double span = phi - phi_a;
    yp += (cfg.g / kp) * phased_integral(beta, 0.0, span, shifted_p, quad);
    ym += (cfg.g / kp) * phased_integral(-beta, 0.0, span, shifted_m, quad);
  }
  const double d = phi - phi_a;
  return (std::exp(-kI * (beta * d)) * yp) * e + (std::exp(kI * (beta * d)) * ym) * es;
}

LorentzVector PhaseDrift::slope(double phi, const LorentzVector& Y) const {
  const Matrix4C f = cfg.tensor().as_map();
  return cplx(-cfg.g / kp) * (f * Y - cfg.profile.potential(phi));
}

SpinCoefficientMap psi_classical(double tau, const PathContext& ctx) {
  const double w = ctx.e0 * ctx.cfg.g * ctx.cfg.B;
  if (std::abs(std::cos(0.5 * w)) < 1e-10) {
    throw Error(ErrorKind::resonant_q, "1 + exp(Q) is singular at e0 g B = " + std::to_string(w));
  }
  const LorentzVector e = epsilon();
  const LorentzVector es = epsilon_star();
  const cplx t = kI * std::tan(0.5 * w);  // tanh(i w / 2)
  const cplx hp = 0.5 * (1.0 - t);
  const cplx hm = 0.5 * (1.0 + t);
  const cplx rot_p = std::exp(kI * (w * tau));
  const cplx rot_m = std::exp(-kI * (w * tau));

  SpinCoefficientMap out;
  out.gamma_coeff = projector_eps() * (rot_p * hp) + projector_eps_star() * (rot_m * hm);
  out.eta_coeff = LorentzVector();
  if (ctx.cfg.profile.is_zero()) return out;

  const auto& prof = ctx.cfg.profile;
  auto dp = [&](double s) { return dot(es, prof.derivative(ctx.path(s))); };
  auto dm = [&](double s) { return dot(e, prof.derivative(ctx.path(s))); };
  const cplx jp1 = phased_integral(-w, 0.0, 1.0, dp, ctx.quad);
  const cplx jm1 = phased_integral(w, 0.0, 1.0, dm, ctx.quad);
  const cplx jpt = tau == 1.0 ? jp1 : phased_integral(-w, 0.0, tau, dp, ctx.quad);
  const cplx jmt = tau == 1.0 ? jm1 : phased_integral(w, 0.0, tau, dm, ctx.quad);
  const cplx ep = std::exp(kI * w);
  const cplx em = std::exp(-kI * w);
  const cplx rp = ep / (1.0 + ep);
  const cplx rm = em / (1.0 + em);
  const double coupling = ctx.e0 * ctx.cfg.g;
  out.eta_coeff = (coupling * rot_p * (rp * jp1 - jpt)) * e + (coupling * rot_m * (rm * jm1 - jmt)) * es;
  return out;
}

cplx eta_a(const LorentzVector& Gamma) { return 0.5 * dot(wave_vector(), longitudinal_part(Gamma)); }

LorentzVector psi_longitudinal_final(const LorentzVector& Gamma, cplx dp) {
  return (0.25 * kI * dp) * wave_vector() + 0.5 * longitudinal_part(Gamma);
}

LorentzVector psi_longitudinal_initial(const LorentzVector& Gamma, cplx dp) {
  return (-0.25 * kI * dp) * wave_vector() + 0.5 * longitudinal_part(Gamma);
}

}  // namespace wavefield
