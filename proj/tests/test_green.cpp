#include "test_support.hpp"

#include <cstring>

#include "wavefield/green.hpp"
#include "wavefield/oracles.hpp"

using namespace wavefield;
using namespace test;

namespace {

EvalContext constant_field_context() {
  EvalContext ctx;
  ctx.m = 1.0;
  ctx.cfg.g = 1.0;
  ctx.cfg.B = 0.8;
  ctx.x_a = LorentzVector(0.1, -0.2, 0.0, 0.0);
  ctx.x_b = LorentzVector(0.7, 0.4, 0.3, -0.5);
  ctx.pL = LorentzVector(0.0, 0.0, 0.5, 1.8);
  return ctx;
}

EvalContext wave_context() {
  auto ctx = constant_field_context();
  ctx.cfg.profile = make_profile(ProfileKind::circular, {0.6, 1.2, 0.0, {}, {}, {}});
  return ctx;
}

bool same_bits(const Matrix4C& a, const Matrix4C& b) { return std::memcmp(a.data(), b.data(), sizeof(cplx) * 16) == 0; }

}  // namespace

TEST_CASE("spin factor") {
  FieldConfig cfg;
  cfg.B = 0.9;
  cfg.g = 1.2;
  const LorentzVector pL(0, 0, 0.3, 1.4);
  const cplx e0(0.7, 0.2);
  const cplx h = I * (0.5 * e0 * cfg.g * cfg.B);
  const Matrix4C s = spin_factor(e0, 0.2, -0.4, pL, cfg, 0.0);
  CHECK(max_abs(s - (std::exp(h) * projector_plus() + std::exp(-h) * projector_minus())) < 1e-15);
  CHECK(std::abs(s.trace() - 4.0 * std::cos(0.5 * e0 * cfg.g * cfg.B)) < 1e-14);
  cfg.B = 0.0;
  CHECK(max_abs(spin_factor(e0, 0.2, -0.4, pL, cfg, 0.0) - Matrix4C::Identity()) <= 4.0 * 2.220446049250313e-16);

  // with a wave the factor is assembled from K(phi_b), K(phi_a)
  cfg.B = 0.9;
  cfg.profile = make_profile(ProfileKind::linear, {0.5, 1.3, 0.0, {}, {}, {}});
  const double kb = K_function(-0.4, pL, cfg, 0.1).value.real();
  (void)kb;
  const Matrix4C full = spin_factor(e0, 0.2, -0.4, pL, cfg, 0.1);
  const Matrix4C parts = spin_factor_from_K(e0, cfg.g * cfg.B, K_function(-0.4, pL, cfg, 0.1).value,
                                            K_function(0.2, pL, cfg, 0.1).value);
  CHECK(same_bits(full, parts));
}

TEST_CASE("integrand limits") {
  auto ctx = constant_field_context();
  for (cplx e0 : {cplx(0.5, 0.5), cplx(1.2, 0.3)}) {
    CHECK(rel(integrand(e0, ctx), integrand_k_zero(e0, ctx)) < 1e-15);
  }
  ctx.cfg.B = 0.0;
  oracles::FreeInput in;
  in.dx1 = 0.6;
  in.dx2 = 0.6;
  in.long_phase = dot(ctx.pL, longitudinal_part(ctx.x_b - ctx.x_a)).real();
  in.pL2 = dot(ctx.pL, ctx.pL).real();
  in.m = ctx.m;
  const cplx e0(0.9, 0.4);
  CHECK(rel(integrand(e0, ctx), oracles::free_integrand(e0, in) * Matrix4C::Identity()) < 1e-14);

  // the unit longitudinal Gaussian leaves the assembly unchanged
  ctx = wave_context();
  const PreparedIntegrand prep(ctx);
  const cplx kernel = schwinger_kernel(e0, prep.cross().X, ctx.cfg);
  const cplx phase = longitudinal_phase(e0, ctx.pL, ctx.x_a, ctx.x_b, ctx.m) + prep.cross().exponent;
  const Matrix4C spin = spin_factor_from_K(e0, ctx.cfg.g * ctx.cfg.B, prep.K_b(), prep.K_a());
  const Matrix4C manual = (kNormalization * kernel * std::exp(phase)) * spin;
  CHECK(rel(prep(e0), manual) < 1e-15);
}

TEST_CASE("constant-field propagator against an independent high-precision integral") {
  const auto ctx = constant_field_context();
  const auto v = gf_k_zero(ctx);
  // mpmath integrals of the P+ and P- channels along e0 = s exp(i pi/4)
  const cplx Ip(0.01594732170407566, -0.03311517699612941);
  const cplx Im(0.030085375227299642, -0.062473344686611226);
  CHECK(rel((v.matrix * projector_plus()).trace() / 2.0, Ip) < 1e-9);
  CHECK(rel((v.matrix * projector_minus()).trace() / 2.0, Im) < 1e-9);
  CHECK(max_abs(v.matrix * projector_plus() - projector_plus() * v.matrix) <= 1e-10);
  CHECK(v.contour_angle == ctx.theta);
  CHECK(v.diagnostics.error_estimate >= 0.0);

  auto wave = wave_context();
  wave.cfg.profile = PlaneWaveProfile();
  CHECK(max_abs(gf_fixed_pL(wave).matrix - v.matrix) <= 1e-10);
}

TEST_CASE("free propagator") {
  EvalContext ctx;
  ctx.m = 1.1;
  ctx.cfg.B = 0.0;
  ctx.x_a = LorentzVector(0.0, 0.0, 0.0, 0.0);
  ctx.x_b = LorentzVector(0.5, -0.3, 0.4, 0.2);
  ctx.pL = LorentzVector(0, 0, 0.6, 1.9);
  const cplx expect(0.08477474424140183, 0.01194661760652215);
  CHECK(rel(gf_fixed_pL(ctx).matrix, expect * Matrix4C::Identity()) < 1e-8);
}

TEST_CASE("weak-field limit is first order in B") {
  // Leading correction is the spin phase exp(+-i e0 g B/2):
  //   |G - G_free| / |G_free| = (g B / 2) (r / M) K1(r M) / K0(r M) + O(B^2)
  struct Case {
    double m;
    LorentzVector x_b, pL;
    double coefficient;  // (1/2)(r/M) K1/K0 from scipy
  };
  for (const Case& c : {Case{1.1, {0.5, -0.3, 0.4, 0.2}, {0, 0, 0.6, 1.9}, 0.3073976396081438},
                        Case{1.1, {0.3, -0.2, 0.4, 0.2}, {0, 0, 0.6, 3.0}, 0.09499763651440783},
                        Case{1.0, {0.2, 0.1, 0.3, -0.1}, {0, 0, 0.0, 4.0}, 0.042972992628297575}}) {
    EvalContext ctx;
    ctx.m = c.m;
    ctx.x_b = c.x_b;
    ctx.pL = c.pL;
    ctx.cfg.B = 1e-4;
    oracles::FreeInput in{c.x_b[0].real(), c.x_b[1].real(), dot(c.pL, longitudinal_part(c.x_b)).real(),
                          dot(c.pL, c.pL).real(), c.m};
    const cplx free = oracles::free_propagator_scalar(in);
    const double r = rel(gf_k_zero(ctx).matrix, free * Matrix4C::Identity());
    CHECK(std::abs(r / ctx.cfg.B - c.coefficient) < 1e-3 * c.coefficient);
  }
  // compact context: the B = 1e-4 deviation stays below 1e-5
  EvalContext ctx;
  ctx.m = 1.0;
  ctx.x_b = LorentzVector(0.2, 0.1, 0.3, -0.1);
  ctx.pL = LorentzVector(0, 0, 0.0, 4.0);
  ctx.cfg.B = 1e-4;
  oracles::FreeInput in{0.2, 0.1, dot(ctx.pL, longitudinal_part(ctx.x_b)).real(), 16.0, 1.0};
  CHECK(rel(gf_k_zero(ctx).matrix, oracles::free_propagator_scalar(in) * Matrix4C::Identity()) <= 1e-5);
}

TEST_CASE("contour invariance and translation covariance with a wave") {
  auto ctx = wave_context();
  ctx.theta = M_PI / 6.0;
  const Matrix4C a = gf_fixed_pL(ctx).matrix;
  ctx.theta = M_PI / 3.0;
  const Matrix4C b = gf_fixed_pL(ctx).matrix;
  CHECK(rel(a, b) <= 1e-4);

  ctx = wave_context();
  const Matrix4C G = gf_fixed_pL(ctx).matrix;
  const LorentzVector d(0, 0, 0.35, 0.35);  // along k: k.d = 0
  auto shifted = ctx;
  shifted.x_b = ctx.x_b + d;
  const cplx factor = std::exp(I * dot(ctx.pL, d));
  CHECK(rel(gf_fixed_pL(shifted).matrix, factor * G) <= 1e-8);
  shifted.x_a = ctx.x_a + d;
  CHECK(rel(gf_fixed_pL(shifted).matrix, G) <= 1e-8);
}

TEST_CASE("serial and parallel propagators are bit-identical") {
  auto ctx = wave_context();
  ctx.quad.execution = Execution::serial;
  const Matrix4C s = gf_fixed_pL(ctx).matrix;
  ctx.quad.execution = Execution::parallel;
  CHECK(same_bits(s, gf_fixed_pL(ctx).matrix));
  CHECK(same_bits(s, gf_fixed_pL(ctx).matrix));
}

TEST_CASE("context validation") {
  auto ctx = constant_field_context();
  ctx.theta = 0.0;
  CHECK(error_kind_of([&] { gf_fixed_pL(ctx); }) == ErrorKind::range);
  ctx = constant_field_context();
  ctx.pL = LorentzVector(0, 0, 0, 0.5);
  CHECK(error_kind_of([&] { gf_fixed_pL(ctx); }) == ErrorKind::range);
  ctx = constant_field_context();
  ctx.x_b = LorentzVector(0.1, -0.2, 0.5, 0.5);
  CHECK(error_kind_of([&] { gf_k_zero(ctx); }) == ErrorKind::range);
  ctx = constant_field_context();
  ctx.cfg.B = 1e12;
  ctx.cfg.g = 1e6;
  CHECK(error_kind_of([&] { gf_k_zero(ctx); }) == ErrorKind::contour_caustic);
  ctx = wave_context();
  ctx.pL = LorentzVector(0, 0, 2.0, 2.0);
  ctx.m = 0.0;
  CHECK(error_kind_of([&] { gf_fixed_pL(ctx); }) == ErrorKind::range);
  ctx = wave_context();
  ctx.e0_max = 0.5;
  CHECK(gf_fixed_pL(ctx).e0_max == 0.5);
}

TEST_CASE("Dirac lift") {
  SUBCASE("constant test matrix gives m G") {
    EvalContext ctx = constant_field_context();
    ctx.cfg.B = 0.0;
    Matrix4C C = Matrix4C::Identity() * cplx(0.3, -0.2);
    C(1, 2) = 0.7;
    GreenEvaluator G = [&](const LorentzVector&) { return C; };
    CHECK(max_abs(dirac_apply(ctx, G).matrix - ctx.m * C) <= 1e-15);
  }
  SUBCASE("gauge term is linear in x_b^T") {
    EvalContext ctx = constant_field_context();
    const Matrix4C C = Matrix4C::Identity();
    GreenEvaluator G = [&](const LorentzVector&) { return C; };
    const Matrix4C s0 = dirac_apply(ctx, G).matrix;
    auto c1 = ctx;
    c1.x_b[0] += 0.2;
    auto c2 = ctx;
    c2.x_b[0] += 0.4;
    const Matrix4C d1 = dirac_apply(c1, G).matrix - s0;
    const Matrix4C d2 = dirac_apply(c2, G).matrix - s0;
    CHECK(max_abs(d2 - 2.0 * d1) <= 1e-8);
    CHECK(max_abs(d1) > 0.0);
  }
  SUBCASE("free case against analytic derivatives") {
    EvalContext ctx;
    ctx.m = 1.1;
    ctx.x_a = LorentzVector(0.0, 0.0, 0.0, 0.0);
    ctx.x_b = LorentzVector(0.5, -0.3, 0.4, 0.2);
    ctx.pL = LorentzVector(0, 0, 0.6, 1.9);
    oracles::FreeInput in{0.5, -0.3, dot(ctx.pL, longitudinal_part(ctx.x_b)).real(), dot(ctx.pL, ctx.pL).real(), 1.1};
    const cplx G = oracles::free_propagator_scalar(in);
    const auto grad = oracles::free_propagator_gradient(in);
    const cplx d[4] = {grad[0], grad[1], I * kMetric[2] * ctx.pL[2] * G, I * kMetric[3] * ctx.pL[3] * G};
    Matrix4C ref = ctx.m * G * Matrix4C::Identity();
    for (int mu = 0; mu < 4; ++mu) ref += I * gammas()[mu] * d[mu];
    CHECK(rel(dirac_apply(ctx, make_gf_evaluator(ctx)).matrix, ref) <= 1e-4);
  }
  SUBCASE("rough evaluator fails step calibration") {
    EvalContext ctx = constant_field_context();
    GreenEvaluator G = [](const LorentzVector& x) {
      const double s = x[0].real() + 2.0 * x[1].real() + 3.0 * x[2].real() + 5.0 * x[3].real();
      return Matrix4C(Matrix4C::Identity() * std::sin(1e7 * s));
    };
    CHECK(error_kind_of([&] { dirac_apply(ctx, G); }) == ErrorKind::step_calibration);
  }
}
