#pragma once

#include <functional>
#include <numbers>
#include <optional>

#include "wavefield/kernels.hpp"

namespace wavefield {

// Proper time runs along the ray e0 = s exp(+i theta), s in (0, e0_max].
// With the fixed metric the transverse Gaussian and the longitudinal phase
// both decay on this ray when pL.pL > m^2.
struct EvalContext {
  double m = 1.0;
  LorentzVector x_a;
  LorentzVector x_b;
  LorentzVector pL;  // longitudinal: slots 2,3 only
  FieldConfig cfg;
  double theta = std::numbers::pi / 4.0;
  std::optional<double> e0_max;  // unset: chosen from the decay rate
  LorentzVector Y0;              // drift path at phi_a, transverse
  QuadratureOptions quad{1e-12, 1e-10, 100000, 16, Execution::parallel};
  QuadratureOptions inner_quad{1e-13, 1e-11, 100000, 1, Execution::serial};
};

// Throws RangeError / ContourCaustic for invalid contexts.
void validate(const EvalContext& ctx);

double resolved_phi0(const EvalContext& ctx);
// Ray length actually used for the proper-time integral.
double resolved_e0_max(const EvalContext& ctx);

// Decay exponent of the integrand per unit s along the ray.
double contour_decay_rate(const EvalContext& ctx);

struct PropagatorValue {
  Matrix4C matrix = Matrix4C::Zero();
  KernelDiagnostics diagnostics;
  double contour_angle = 0.0;
  double e0_max = 0.0;
};

// Overall constant in front of the proper-time integral. With it the
// zero-field limit is (1/2pi) K0(|dX| sqrt(pL^2 - m^2)) exp(i pL.dx^L).
inline constexpr cplx kNormalization{0.0, -0.5};

// Spin factor
//   e^{i e0 gB/2} [1 - kslash epsslash* K(phi_b)] P+ [1 + kslash epsslash K*(phi_a)]
// + e^{-i e0 gB/2} [1 - kslash epsslash K*(phi_b)] P- [1 + kslash epsslash* K(phi_a)]
Matrix4C spin_factor(cplx e0, double phi_a, double phi_b, const LorentzVector& pL, const FieldConfig& cfg,
                     double phi0, const QuadratureOptions& quad = {});

// Same, from precomputed K(phi_b) and K(phi_a).
Matrix4C spin_factor_from_K(cplx e0, double gB, cplx K_b, cplx K_a);

// Everything in the integrand that does not depend on e0.
class PreparedIntegrand {
 public:
  explicit PreparedIntegrand(const EvalContext& ctx);

  Matrix4C operator()(cplx e0) const;

  const CrossPhase& cross() const { return cross_; }
  cplx K_b() const { return K_b_; }
  cplx K_a() const { return K_a_; }

 private:
  EvalContext ctx_;
  CrossPhase cross_;
  cplx K_b_ = 0.0;
  cplx K_a_ = 0.0;
  Matrix4C upper_;  // [1 - kε* K_b] P+ [1 + kε K_a*]
  Matrix4C lower_;  // [1 - kε K_b*] P- [1 + kε* K_a]
};

// Proper-time integrand at a single e0 (full recomputation).
Matrix4C integrand(cplx e0, const EvalContext& ctx);

// Integrand of the zero-wave-vector limit (constant field only).
Matrix4C integrand_k_zero(cplx e0, const EvalContext& ctx);

// e0 integral at fixed pL (mixed representation).
PropagatorValue gf_fixed_pL(const EvalContext& ctx);

// e0 integral of the constant-field limit; the profile is ignored.
PropagatorValue gf_k_zero(const EvalContext& ctx);

using GreenEvaluator = std::function<Matrix4C(const LorentzVector& x_b)>;

GreenEvaluator make_gf_evaluator(const EvalContext& ctx);
GreenEvaluator make_gf_k_zero_evaluator(const EvalContext& ctx);

struct DiracOptions {
  double step = 0.05;
  int max_halvings = 4;
};

// Total potential A_mu(x) = (1/2) f_{mu nu} x^T nu + A^p_mu(k.x), lowered.
LorentzVector total_potential_lowered(const FieldConfig& cfg, const LorentzVector& x);

// i gamma^mu (d_mu - g A_mu(x_b)) G + m G from precomputed derivatives.
Matrix4C dirac_combine(const EvalContext& ctx, const Matrix4C& G, const std::array<Matrix4C, 4>& dG);

struct DerivativeEstimate {
  std::array<Matrix4C, 4> dG;
  double step = 0.0;
  double discrepancy = 0.0;
};

// Fourth-order central differences in x_b with Richardson step calibration.
// Throws StepCalibrationFailure when successive steps disagree by > 10%.
DerivativeEstimate x_b_derivatives(const EvalContext& ctx, const GreenEvaluator& G,
                                   const DiracOptions& opt = {});

// (i gamma^mu (d_mu - g A_mu(x_b)) + m) G(x_b, x_a)
PropagatorValue dirac_apply(const EvalContext& ctx, const GreenEvaluator& G, const DiracOptions& opt = {});

}  // namespace wavefield
