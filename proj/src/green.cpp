#include "wavefield/green.hpp"

#include <cmath>

#include "wavefield/errors.hpp"

namespace wavefield {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

// exp(-40) relative tail at the end of the ray.
constexpr double kTailExponent = 40.0;

bool is_real(const LorentzVector& v) {
  for (int mu = 0; mu < 4; ++mu) {
    if (v[mu].imag() != 0.0 || !std::isfinite(v[mu].real())) return false;
  }
  return true;
}

CrossPhaseInput cross_input(const EvalContext& ctx) {
  return {ctx.cfg, ctx.pL, ctx.x_a, ctx.x_b, ctx.Y0, ctx.inner_quad};
}

TransverseEndpoints plain_endpoints(const EvalContext& ctx) {
  return {ctx.x_a[0].real(), ctx.x_a[1].real(), ctx.x_b[0].real(), ctx.x_b[1].real()};
}

template <class Integrand>
PropagatorValue integrate_ray(const EvalContext& ctx, const Integrand& f) {
  const double s_max = resolved_e0_max(ctx);
  const cplx dir = std::exp(kI * ctx.theta);
  auto along = [&](double s) -> Matrix4C { return f(s * dir) * dir; };
  const auto r = integrate<Matrix4C>(along, 0.0, s_max, ctx.quad);

  PropagatorValue out;
  out.matrix = r.value;
  out.contour_angle = ctx.theta;
  out.e0_max = s_max;
  const double tail = max_abs(f(s_max * dir)) / contour_decay_rate(ctx);
  out.diagnostics.error_estimate = r.error + tail;
  out.diagnostics.nodes = r.nodes;
  out.diagnostics.near_singularity = false;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (!std::isfinite(out.matrix(mu, nu).real()) || !std::isfinite(out.matrix(mu, nu).imag())) {
        throw Error(ErrorKind::quadrature_failure, "non-finite propagator entry");
      }
    }
  }
  return out;
}

}  // namespace

void validate(const EvalContext& ctx) {
  auto range = [](bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorKind::range, msg);
  };
  range(std::isfinite(ctx.m), "m must be finite");
  range(std::isfinite(ctx.cfg.g) && std::isfinite(ctx.cfg.B), "g and B must be finite");
  range(ctx.theta > 0.0 && ctx.theta < 0.5 * kPi, "contour angle must lie strictly inside (0, pi/2)");
  range(!ctx.e0_max || (std::isfinite(*ctx.e0_max) && *ctx.e0_max > 0.0), "e0_max must be > 0");
  range(is_real(ctx.x_a) && is_real(ctx.x_b) && is_real(ctx.pL), "x_a, x_b, pL must be real and finite");
  range(ctx.pL[0] == 0.0 && ctx.pL[1] == 0.0, "pL must have zero transverse slots");
  range(is_real(ctx.Y0) && ctx.Y0[2] == 0.0 && ctx.Y0[3] == 0.0, "Y0 must be real and transverse");
  const double mass_gap = dot(ctx.pL, ctx.pL).real() - ctx.m * ctx.m;
  range(mass_gap > 0.0, "proper-time integral needs pL.pL - m^2 > 0 (got " + std::to_string(mass_gap) + ")");

  const double gB = std::abs(ctx.cfg.g * ctx.cfg.B);
  if (gB > 0.0) {
    const double distance = (2.0 * kPi / gB) * std::sin(ctx.theta);
    if (distance < 1e-8) throw Error(ErrorKind::contour_caustic, "ray passes within 1e-8 of a caustic");
  }
  if (!ctx.cfg.profile.is_zero() && dot(wave_vector(), ctx.pL).real() == 0.0) {
    throw Error(ErrorKind::division_by_zero, "non-zero profile needs k.pL != 0");
  }
}

double resolved_phi0(const EvalContext& ctx) {
  return ctx.cfg.phi0.value_or(dot(wave_vector(), ctx.x_a).real());
}

double contour_decay_rate(const EvalContext& ctx) {
  return 0.5 * std::sin(ctx.theta) * (dot(ctx.pL, ctx.pL).real() - ctx.m * ctx.m);
}

double resolved_e0_max(const EvalContext& ctx) {
  if (ctx.e0_max) return *ctx.e0_max;
  return kTailExponent / contour_decay_rate(ctx);
}

Matrix4C spin_factor_from_K(cplx e0, double gB, cplx K_b, cplx K_a) {
  const Matrix4C I = Matrix4C::Identity();
  const Matrix4C k_es = slash(wave_vector()) * slash(epsilon_star());
  const Matrix4C k_e = slash(wave_vector()) * slash(epsilon());
  const Matrix4C up = (I - k_es * K_b) * projector_plus() * (I + k_e * std::conj(K_a));
  const Matrix4C down = (I - k_e * std::conj(K_b)) * projector_minus() * (I + k_es * K_a);
  const cplx half = kI * (0.5 * e0 * gB);
  return std::exp(half) * up + std::exp(-half) * down;
}

Matrix4C spin_factor(cplx e0, double phi_a, double phi_b, const LorentzVector& pL, const FieldConfig& cfg,
                     double phi0, const QuadratureOptions& quad) {
  const cplx K_b = K_function(phi_b, pL, cfg, phi0, quad).value;
  const cplx K_a = K_function(phi_a, pL, cfg, phi0, quad).value;
  return spin_factor_from_K(e0, cfg.g * cfg.B, K_b, K_a);
}

PreparedIntegrand::PreparedIntegrand(const EvalContext& ctx) : ctx_(ctx) {
  cross_ = cross_phase(cross_input(ctx));
  const double phi0 = resolved_phi0(ctx);
  K_b_ = K_function(cross_.phi_b, ctx.pL, ctx.cfg, phi0, ctx.inner_quad).value;
  K_a_ = K_function(cross_.phi_a, ctx.pL, ctx.cfg, phi0, ctx.inner_quad).value;

  const Matrix4C I = Matrix4C::Identity();
  const Matrix4C k_es = slash(wave_vector()) * slash(epsilon_star());
  const Matrix4C k_e = slash(wave_vector()) * slash(epsilon());
  upper_ = (I - k_es * K_b_) * projector_plus() * (I + k_e * std::conj(K_a_));
  lower_ = (I - k_e * std::conj(K_b_)) * projector_minus() * (I + k_es * K_a_);

  const auto& X = cross_.X;
  if (X.xa1 == X.xb1 && X.xa2 == X.xb2) {
    throw Error(ErrorKind::range, "coincident transverse endpoints: the mixed representation diverges");
  }
}

Matrix4C PreparedIntegrand::operator()(cplx e0) const {
  const cplx kernel = schwinger_kernel(e0, cross_.X, ctx_.cfg);
  const cplx phase = longitudinal_phase(e0, ctx_.pL, ctx_.x_a, ctx_.x_b, ctx_.m) + cross_.exponent;
  const cplx half = kI * (0.5 * e0 * ctx_.cfg.g * ctx_.cfg.B);
  const Matrix4C spin = std::exp(half) * upper_ + std::exp(-half) * lower_;
  // The longitudinal fluctuation Gaussian contributes a unit factor.
  constexpr double kLongitudinalGaussian = 1.0;
  return (kNormalization * kLongitudinalGaussian * kernel * std::exp(phase)) * spin;
}

Matrix4C integrand(cplx e0, const EvalContext& ctx) { return PreparedIntegrand(ctx)(e0); }

Matrix4C integrand_k_zero(cplx e0, const EvalContext& ctx) {
  const cplx kernel = schwinger_kernel(e0, plain_endpoints(ctx), ctx.cfg);
  const cplx phase = longitudinal_phase(e0, ctx.pL, ctx.x_a, ctx.x_b, ctx.m);
  const cplx half = kI * (0.5 * e0 * ctx.cfg.g * ctx.cfg.B);
  const Matrix4C braces = std::exp(half) * projector_plus() + std::exp(-half) * projector_minus();
  return (kNormalization * kernel * std::exp(phase)) * braces;
}

PropagatorValue gf_fixed_pL(const EvalContext& ctx) {
  validate(ctx);
  const PreparedIntegrand f(ctx);
  PropagatorValue out = integrate_ray(ctx, f);
  out.diagnostics.error_estimate += f.cross().diagnostics.error_estimate;
  return out;
}

PropagatorValue gf_k_zero(const EvalContext& ctx) {
  EvalContext plain = ctx;
  plain.cfg.profile = PlaneWaveProfile();
  validate(plain);
  const auto X = plain_endpoints(plain);
  if (X.xa1 == X.xb1 && X.xa2 == X.xb2) {
    throw Error(ErrorKind::range, "coincident transverse endpoints: the mixed representation diverges");
  }
  // Everything but the kernel and the two phases is fixed.
  const Matrix4C P_plus = projector_plus();
  const Matrix4C P_minus = projector_minus();
  auto f = [&](cplx e0) -> Matrix4C {
    const cplx kernel = schwinger_kernel(e0, X, plain.cfg);
    const cplx phase = longitudinal_phase(e0, plain.pL, plain.x_a, plain.x_b, plain.m);
    const cplx half = kI * (0.5 * e0 * plain.cfg.g * plain.cfg.B);
    return (kNormalization * kernel * std::exp(phase)) * (std::exp(half) * P_plus + std::exp(-half) * P_minus);
  };
  return integrate_ray(plain, f);
}

GreenEvaluator make_gf_evaluator(const EvalContext& ctx) {
  return [ctx](const LorentzVector& x_b) {
    EvalContext c = ctx;
    c.x_b = x_b;
    return gf_fixed_pL(c).matrix;
  };
}

GreenEvaluator make_gf_k_zero_evaluator(const EvalContext& ctx) {
  return [ctx](const LorentzVector& x_b) {
    EvalContext c = ctx;
    c.x_b = x_b;
    return gf_k_zero(c).matrix;
  };
}

LorentzVector total_potential_lowered(const FieldConfig& cfg, const LorentzVector& x) {
  const LorentzVector a = cplx(0.5) * (cfg.tensor().as_map() * transverse_project(x));
  const double phi = dot(wave_vector(), x).real();
  return lower(a + cfg.profile.potential(phi));
}

Matrix4C dirac_combine(const EvalContext& ctx, const Matrix4C& G, const std::array<Matrix4C, 4>& dG) {
  const LorentzVector A = total_potential_lowered(ctx.cfg, ctx.x_b);
  const auto& gam = gammas();
  Matrix4C S = ctx.m * G;
  for (int mu = 0; mu < 4; ++mu) S += kI * gam[mu] * (dG[mu] - (ctx.cfg.g * A[mu]) * G);
  return S;
}

DerivativeEstimate x_b_derivatives(const EvalContext& ctx, const GreenEvaluator& G, const DiracOptions& opt) {
  auto stencil = [&](int mu, double h) {
    auto at = [&](double t) {
      LorentzVector x = ctx.x_b;
      x[mu] += t;
      return G(x);
    };
    return Matrix4C((-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h));
  };
  const double scale = max_abs(G(ctx.x_b));

  DerivativeEstimate out;
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    double h = opt.step;
    Matrix4C coarse = stencil(mu, h);
    bool accepted = false;
    for (int k = 0; k < opt.max_halvings; ++k) {
      const Matrix4C fine = stencil(mu, 0.5 * h);
      const double diff = max_abs(fine - coarse);
      const double tol = 0.1 * max_abs(fine) + 1e-10 * (1.0 + scale);
      if (diff <= tol) {
        // fourth-order Richardson step
        out.dG[mu] = fine + (fine - coarse) / 15.0;
        out.step = std::max(out.step, 0.5 * h);
        worst = std::max(worst, diff / std::max(max_abs(fine), 1e-300));
        accepted = true;
        break;
      }
      coarse = fine;
      h *= 0.5;
    }
    if (!accepted) {
      throw Error(ErrorKind::step_calibration,
                  "finite-difference estimates for d/dx^" + std::to_string(mu) + " disagree by more than 10%");
    }
  }
  out.discrepancy = worst;
  return out;
}

PropagatorValue dirac_apply(const EvalContext& ctx, const GreenEvaluator& G, const DiracOptions& opt) {
  const Matrix4C G0 = G(ctx.x_b);
  const DerivativeEstimate d = x_b_derivatives(ctx, G, opt);
  PropagatorValue out;
  out.matrix = dirac_combine(ctx, G0, d.dG);
  out.contour_angle = ctx.theta;
  out.e0_max = resolved_e0_max(ctx);
  out.diagnostics.error_estimate = d.discrepancy;
  out.diagnostics.nodes = 0;
  return out;
}

}  // namespace wavefield
