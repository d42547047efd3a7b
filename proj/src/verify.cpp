#include "wavefield/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "wavefield/errors.hpp"
#include "wavefield/green.hpp"
#include "wavefield/oracles.hpp"
#include "wavefield/run.hpp"

namespace wavefield {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }
  cplx complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }
  double sign() { return pick(2) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 gen_;
};

// Tracks the worst ratio measured/tolerance, reported as measured against
// the criterion's headline tolerance.
struct Tally {
  double headline_tol = 0.0;
  double worst_ratio = 0.0;
  double worst_value = 0.0;
  bool failed = false;
  std::ostringstream notes;

  void add(double value, double tol) {
    const double ratio = tol > 0.0 ? value / tol : (value == 0.0 ? 0.0 : INFINITY);
    if (!(value <= tol)) failed = true;
    if (!(ratio <= worst_ratio) || std::isnan(value)) {
      worst_ratio = ratio;
      worst_value = value;
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      failed = true;
      notes << what << "; ";
    }
  }
};

CriterionResult finish(int id, const std::string& name, Tally& t) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.pass = !t.failed;
  r.measured = t.worst_value;
  r.tolerance = t.headline_tol;
  r.detail = t.notes.str();
  return r;
}

CriterionResult guarded(int id, const std::string& name, double tol, const std::function<void(Tally&)>& body) {
  Tally t;
  t.headline_tol = tol;
  try {
    body(t);
  } catch (const std::exception& e) {
    t.require(false, std::string("exception: ") + e.what());
  }
  return finish(id, name, t);
}

PlaneWaveProfile random_profile(Rng& rng) {
  ProfileParams p;
  p.amplitude = rng.uniform(0.2, 1.0);
  p.frequency = rng.uniform(0.5, 2.0);
  p.sigma = rng.uniform(1.0, 3.0);
  const ProfileKind kinds[] = {ProfileKind::linear, ProfileKind::circular, ProfileKind::pulse};
  return make_profile(kinds[rng.pick(3)], p);
}

LorentzVector random_point(Rng& rng, double r) {
  return LorentzVector(rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r));
}

// Context with pL.pL - m^2 in [0.5, 2] and well separated transverse endpoints.
EvalContext random_context(Rng& rng, double B_range, bool with_profile) {
  EvalContext ctx;
  ctx.m = rng.uniform(0.5, 1.5);
  ctx.cfg.g = rng.uniform(0.5, 1.5);
  ctx.cfg.B = B_range > 0.0 ? rng.sign() * rng.uniform(0.3 * B_range, B_range) : 0.0;
  if (with_profile) ctx.cfg.profile = random_profile(rng);
  const double p2 = rng.uniform(-1.0, 1.0);
  const double gap = rng.uniform(0.5, 2.0);
  ctx.pL = LorentzVector(0.0, 0.0, p2, rng.sign() * std::sqrt(p2 * p2 + ctx.m * ctx.m + gap));
  ctx.x_a = random_point(rng, 1.0);
  do {
    ctx.x_b = random_point(rng, 1.0);
  } while (std::hypot((ctx.x_b[0] - ctx.x_a[0]).real(), (ctx.x_b[1] - ctx.x_a[1]).real()) < 0.3);
  return ctx;
}

double rel_diff(const Matrix4C& a, const Matrix4C& ref) { return max_abs(a - ref) / max_abs(ref); }

bool bit_identical(const Matrix4C& a, const Matrix4C& b) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (std::memcmp(&a(r, c), &b(r, c), sizeof(cplx)) != 0) return false;
    }
  return true;
}

oracles::FreeInput free_input(const EvalContext& c) {
  oracles::FreeInput in;
  in.dx1 = (c.x_b[0] - c.x_a[0]).real();
  in.dx2 = (c.x_b[1] - c.x_a[1]).real();
  in.long_phase = dot(c.pL, longitudinal_part(c.x_b - c.x_a)).real();
  in.pL2 = dot(c.pL, c.pL).real();
  in.m = c.m;
  return in;
}

// ---------------------------------------------------------------- criteria

CriterionResult clifford_suite(Rng& rng) {
  return guarded(1, "clifford", 1e-12, [&](Tally& t) {
    const auto& gam = gammas();
    const Matrix4C I = Matrix4C::Identity();
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        const double gmn = mu == nu ? kMetric[mu] : 0.0;
        t.add(max_abs(anticommutator(gam[mu], gam[nu]) - 2.0 * gmn * I), 1e-12);
      }
    for (int i = 0; i < 20; ++i) {
      const auto pair = check_identity_42(rng.complex(2.0));
      t.add(max_abs(pair.lhs - pair.rhs), 1e-10);
    }
    const Matrix4C Pp = projector_plus(), Pm = projector_minus();
    t.add(max_abs(Pp + Pm - I), 4.0 * std::numeric_limits<double>::epsilon());
    t.add(max_abs(Pp * Pp - Pp), 1e-12);
    t.add(max_abs(Pm * Pm - Pm), 1e-12);
    t.add(max_abs(Pp * Pm), 1e-12);
    t.add(max_abs(Pm * Pp), 1e-12);
  });
}

CriterionResult basis_suite(Rng& rng) {
  return guarded(2, "basis", 1e-12, [&](Tally& t) {
    const LorentzVector e = epsilon(), es = epsilon_star(), k = wave_vector();
    t.require(dot(e, e) == 0.0, "eps.eps != 0");
    t.require(dot(k, k) == 0.0, "k.k != 0");
    t.require(dot(k, e) == 0.0, "k.eps != 0");
    t.require(dot(k, es) == 0.0, "k.eps* != 0");
    // 1/sqrt(2) is not representable; eps.eps* = 1 holds to the last bit of 2 r^2.
    t.add(std::abs(dot(e, es) - 1.0), std::numeric_limits<double>::epsilon());
    for (int i = 0; i < 10; ++i) {
      FieldConfig cfg;
      cfg.B = rng.uniform(-3.0, 3.0);
      const Matrix4C f = cfg.tensor().as_map();
      t.add((f * e - (kI * cfg.B) * e).max_abs(), 1e-12);
      t.add((f * es + (kI * cfg.B) * es).max_abs(), 1e-12);
    }
  });
}

CriterionResult plane_wave_tensor_suite(Rng& rng) {
  return guarded(3, "plane_wave_tensor", 1e-12, [&](Tally& t) {
    const LorentzVector k_low = lower(wave_vector());
    for (int i = 0; i < 20; ++i) {
      Matrix4C M = Matrix4C::Zero();
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          M(a, b) = rng.complex(1.0);
          M(b, a) = -M(a, b);
        }
      const PlaneWaveProfile prof = random_profile(rng);
      const double phi = rng.uniform(-3.0, 3.0);
      const Matrix4C fp = plane_wave_tensor(prof, phi);
      const LorentzVector dA_low = lower(prof.derivative(phi));
      cplx lhs = 0.0, rhs = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          lhs += fp(a, b) * M(a, b);
          rhs += 2.0 * k_low[a] * dA_low[b] * M(a, b);
        }
      t.add(std::abs(lhs - rhs), 1e-12);
    }
  });
}

CriterionResult spin_path_suite(Rng& rng) {
  return guarded(4, "spin_paths", 1e-6, [&](Tally& t) {
    const QuadratureOptions tight{1e-15, 1e-13, 100000, 1, Execution::serial};
    const double h = 1e-4;
    for (int draw = 0; draw < 3; ++draw) {
      FieldConfig cfg;
      cfg.g = rng.uniform(0.5, 1.5);
      cfg.B = rng.uniform(-1.5, 1.5);
      cfg.profile = random_profile(rng);
      const double e0 = rng.uniform(0.3, 1.3);
      const LorentzVector pL(0.0, 0.0, rng.uniform(-1.0, 1.0), rng.uniform(1.5, 2.5));
      const PathContext ctx = make_path_context(e0, cfg, pL, rng.uniform(-1.0, 1.0), tight);
      const Matrix4C Q = (e0 * cfg.g) * cfg.tensor().as_map();

      for (int i = 1; i <= 20; ++i) {
        const double tau = i / 21.0;
        const auto mid = psi_classical(tau, ctx);
        const auto up = psi_classical(tau + h, ctx);
        const auto dn = psi_classical(tau - h, ctx);
        const Matrix4C dM = (up.gamma_coeff - dn.gamma_coeff) / (2.0 * h);
        const LorentzVector dv = (up.eta_coeff - dn.eta_coeff) * cplx(1.0 / (2.0 * h));
        t.add(max_abs(dM - Q * mid.gamma_coeff), 1e-6);
        const LorentzVector drive = cplx(e0 * cfg.g) * transverse_project(cfg.profile.derivative(ctx.path(tau)));
        t.add((dv - Q * mid.eta_coeff + drive).max_abs(), 1e-6);
      }
      const auto s0 = psi_classical(0.0, ctx);
      const auto s1 = psi_classical(1.0, ctx);
      t.add(max_abs(s1.gamma_coeff + s0.gamma_coeff - projector_transverse()), 1e-10);
      t.add((s1.eta_coeff + s0.eta_coeff).max_abs(), 1e-10);
    }
    // Longitudinal constraint with dyadic inputs, so every operation is exact.
    t.require(eta_a(LorentzVector(0.0, 0.0, 1.0, 0.0)) == 0.5, "eta_a(0,0,1,0) != 1/2");
    for (int i = 0; i < 10; ++i) {
      auto dyadic = [&] { return cplx(rng.pick(33) - 16, rng.pick(33) - 16) / 8.0; };
      const LorentzVector Gamma(dyadic(), dyadic(), dyadic(), dyadic());
      const cplx dp = dyadic();
      const cplx target = eta_a(Gamma);
      t.require(dot(wave_vector(), psi_longitudinal_final(Gamma, dp)) == target, "k.psi^L(1) != eta_a");
      t.require(dot(wave_vector(), psi_longitudinal_initial(Gamma, dp)) == target, "k.psi^L(0) != eta_a");
    }
  });
}

CriterionResult sliced_oracle_suite(Rng& rng) {
  return guarded(5, "sliced_kernel_oracle", 1e-3, [&](Tally& t) {
    const cplx ray = std::exp(kI * (kPi / 4.0));
    for (int i = 0; i < 5; ++i) {
      const oracles::Endpoints2D ends{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                      rng.uniform(-1, 1)};
      const double g = rng.uniform(0.5, 1.5);
      const double B = rng.sign() * rng.uniform(0.5, 1.5);
      const cplx e0 = rng.uniform(0.3, 1.5) * ray;
      const auto rich = oracles::sliced_kernel_extrapolated(ends, e0, g, B);
      const cplx ref = schwinger_kernel(e0, {ends.xa1, ends.xa2, ends.xb1, ends.xb2}, g, B);
      t.add(std::abs(rich.value - ref) / std::abs(ref), 1e-3);
    }
    for (int i = 0; i < 3; ++i) {
      const TransverseEndpoints ep{0.0, 0.0, rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const cplx e0 = rng.uniform(0.3, 1.5);
      const double d2 = ep.xb1 * ep.xb1 + ep.xb2 * ep.xb2;
      const cplx free = kI / (2.0 * kPi * e0) * std::exp(-kI * d2 / (2.0 * e0));
      const cplx k = schwinger_kernel(e0, ep, 1.0, 1e-4);
      t.add(std::abs(k - free) / std::abs(free), 1e-6);
    }
  });
}

CriterionResult spin_determinant_suite(Rng& rng) {
  return guarded(6, "spin_determinant", 1e-12, [&](Tally& t) {
    for (int i = 0; i < 10; ++i) {
      const double g = rng.uniform(0.5, 1.5);
      const double B = rng.uniform(-2.0, 2.0);
      // Principal square root: keep |e0 g B| < pi so cos(e0 g B / 2) > 0.
      const double e0 = rng.uniform(0.05, 0.95) * kPi / std::abs(g * B);
      t.add(std::abs(spin_determinant(e0, g, B) - oracles::spin_determinant_eigen(e0, g, B)), 1e-12);
    }
  });
}

CriterionResult K_suite(Rng& rng) {
  return guarded(7, "K_function", 1e-8, [&](Tally& t) {
    const QuadratureOptions quad{1e-13, 1e-11, 100000, 1, Execution::serial};
    for (int i = 0; i < 50; ++i) {
      oracles::KOracleParams p;
      FieldConfig cfg;
      cfg.g = p.g = rng.uniform(0.5, 2.0);
      p.kp = rng.sign() * rng.uniform(0.5, 2.0);
      const LorentzVector pL(0.0, 0.0, 0.0, -p.kp);  // k.pL = kp
      p.phi0 = rng.uniform(-1.0, 1.0);
      const double phi = rng.uniform(-3.0, 3.0);
      oracles::KOracleKind kind;
      if (i % 2 == 0) {
        kind = oracles::KOracleKind::b_zero;
        cfg.profile = p.profile = random_profile(rng);
      } else {
        kind = oracles::KOracleKind::constant_slope;
        cfg.B = p.B = rng.uniform(-2.0, 2.0);
        cfg.profile_sign_toggle = p.sign_toggle = rng.pick(2) == 1;
        const double a = rng.uniform(-1.0, 1.0);
        cfg.profile = make_profile(ProfileKind::ramp, {a, 0.0, 0.0, {}, {}, {}});
        p.slope = dot(epsilon(), unit_e1()) * a;
      }
      const cplx K = K_function(phi, pL, cfg, p.phi0, quad).value;
      const cplx ref = oracles::K_closed_form(kind, p, phi);
      t.add(std::abs(K - ref) / std::max(1.0, std::abs(ref)), 1e-8);
    }
    FieldConfig zero;
    zero.B = 1.3;
    for (double phi : {-2.0, 0.0, 0.7, 5.0}) {
      t.require(K_function(phi, LorentzVector(0, 0, 0, 1), zero, 0.3).value == cplx(0.0, 0.0), "K != 0 for zero profile");
    }
  });
}

CriterionResult k_zero_reduction_suite(Rng& rng) {
  return guarded(8, "zero_profile_reduction", 1e-10, [&](Tally& t) {
    for (int i = 0; i < 10; ++i) {
      const EvalContext ctx = random_context(rng, 1.5, false);
      const Matrix4C a = gf_fixed_pL(ctx).matrix;
      const Matrix4C b = gf_k_zero(ctx).matrix;
      t.add(max_abs(a - b), 1e-10);
    }
  });
}

CriterionResult contour_suite(Rng& rng) {
  return guarded(9, "contour_invariance", 1e-4, [&](Tally& t) {
    for (int i = 0; i < 5; ++i) {
      EvalContext ctx = random_context(rng, 1.5, true);
      ctx.theta = kPi / 6.0;
      const Matrix4C a = gf_fixed_pL(ctx).matrix;
      ctx.theta = kPi / 3.0;
      const Matrix4C b = gf_fixed_pL(ctx).matrix;
      t.add(rel_diff(a, b), 1e-4);
    }
  });
}

CriterionResult free_limit_suite(Rng& rng) {
  return guarded(10, "free_field_limit", 1e-5, [&](Tally& t) {
    for (int i = 0; i < 3; ++i) {
      EvalContext ctx = random_context(rng, 0.0, false);
      ctx.cfg.B = 1e-6;
      const cplx free = oracles::free_propagator_scalar(free_input(ctx));
      t.add(rel_diff(gf_fixed_pL(ctx).matrix, free * Matrix4C::Identity()), 1e-5);
    }
  });
}

Matrix4C reference_dirac(const EvalContext& ctx, const Matrix4C& G, const std::array<Matrix4C, 4>& dG) {
  // A^0 = B x^1 / 2, A^1 = -B x^0 / 2 (upper), lowered with the transverse +1 metric entries.
  const double A0 = 0.5 * ctx.cfg.B * ctx.x_b[1].real();
  const double A1 = -0.5 * ctx.cfg.B * ctx.x_b[0].real();
  const double A[4] = {A0, A1, 0.0, 0.0};
  const auto& gam = gammas();
  Matrix4C S = ctx.m * G;
  for (int mu = 0; mu < 4; ++mu) S += kI * gam[mu] * (dG[mu] - (ctx.cfg.g * A[mu]) * G);
  return S;
}

CriterionResult dirac_suite(Rng& rng) {
  return guarded(11, "dirac_lift", 1e-4, [&](Tally& t) {
    {
      EvalContext ctx = random_context(rng, 0.0, false);
      const auto in = free_input(ctx);
      const cplx G = oracles::free_propagator_scalar(in);
      const auto grad = oracles::free_propagator_gradient(in);
      const Matrix4C I = Matrix4C::Identity();
      std::array<Matrix4C, 4> dG{grad[0] * I, grad[1] * I, (kI * kMetric[2] * ctx.pL[2]) * G * I,
                                 (kI * kMetric[3] * ctx.pL[3]) * G * I};
      const Matrix4C ref = reference_dirac(ctx, G * I, dG);
      const Matrix4C got = dirac_apply(ctx, make_gf_evaluator(ctx)).matrix;
      t.add(rel_diff(got, ref), 1e-4);

      // Same free point against the integrated analytic derivative of the integrand.
      oracles::K0Point p;
      p.m = ctx.m;
      p.g = ctx.cfg.g;
      p.B = 0.0;
      for (int mu = 0; mu < 4; ++mu) {
        p.x_a[mu] = ctx.x_a[mu].real();
        p.x_b[mu] = ctx.x_b[mu].real();
        p.pL[mu] = ctx.pL[mu].real();
      }
      const auto integ = oracles::k_zero_gradient_integrated(p, ctx.theta, resolved_e0_max(ctx));
      t.add(rel_diff(got, reference_dirac(ctx, integ.value, integ.d)), 1e-4);
    }
    for (int i = 0; i < 3; ++i) {
      const EvalContext ctx = random_context(rng, 1.5, false);
      oracles::K0Point p;
      p.m = ctx.m;
      p.g = ctx.cfg.g;
      p.B = ctx.cfg.B;
      for (int mu = 0; mu < 4; ++mu) {
        p.x_a[mu] = ctx.x_a[mu].real();
        p.x_b[mu] = ctx.x_b[mu].real();
        p.pL[mu] = ctx.pL[mu].real();
      }
      const auto integ = oracles::k_zero_gradient_integrated(p, ctx.theta, resolved_e0_max(ctx));
      const Matrix4C ref = reference_dirac(ctx, integ.value, integ.d);
      const Matrix4C got = dirac_apply(ctx, make_gf_k_zero_evaluator(ctx)).matrix;
      t.add(rel_diff(got, ref), 1e-3);
    }
  });
}

CriterionResult determinism_suite(Rng& rng) {
  return guarded(12, "determinism", 0.0, [&](Tally& t) {
    EvalContext ctx = random_context(rng, 1.0, true);
    ctx.quad.execution = Execution::serial;
    const Matrix4C s1 = gf_fixed_pL(ctx).matrix;
    const Matrix4C s2 = gf_fixed_pL(ctx).matrix;
    ctx.quad.execution = Execution::parallel;
    const Matrix4C p1 = gf_fixed_pL(ctx).matrix;
    t.require(bit_identical(s1, s2), "repeated serial gf differs");
    t.require(bit_identical(s1, p1), "serial and parallel gf differ");

    RunConfig rc;
    rc.eval = ctx;
    rc.grid = Grid{"B", {0.5, 0.75, 1.0}};
    const RunOutput a = run("gf", rc);
    const RunOutput b = run("gf", rc);
    t.require(a.csv() == b.csv(), "repeated gf CSV differs");
    t.require(a.sidecar.dump() == b.sidecar.dump(), "repeated gf sidecar differs");
    const auto bad = ledger_mismatches(a.sidecar.at("conventions"));
    for (const auto& key : bad) t.require(false, "ledger entry '" + key + "' disagrees with compiled constants");
    t.add(0.0, 0.0);
  });
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt) {
  using Suite = CriterionResult (*)(Rng&);
  const Suite suites[] = {clifford_suite,         basis_suite,   plane_wave_tensor_suite, spin_path_suite,
                          sliced_oracle_suite,    spin_determinant_suite, K_suite,
                          k_zero_reduction_suite, contour_suite, free_limit_suite,        dirac_suite,
                          determinism_suite};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < std::size(suites); ++i) {
    Rng rng(opt.seed + 7919 * i);
    out.push_back(suites[i](rng));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "criterion %2d %-24s %s measured=%.3e tolerance=%.1e", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.measured, r.tolerance);
  std::string s = buf;
  if (!r.detail.empty()) s += "  (" + r.detail + ")";
  return s;
}

nlohmann::json report_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  }
  return {{"passed", all_passed(results)}, {"criteria", arr}};
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

}  // namespace wavefield
