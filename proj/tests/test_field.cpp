#include "test_support.hpp"

#include "wavefield/field.hpp"

using namespace wavefield;
using namespace test;

TEST_CASE("constant field tensor") {
  Rng rng;
  for (int i = 0; i < 10; ++i) {
    const ConstantFieldTensor f{rng(-3.0, 3.0)};
    const Matrix4C low = f.lowered();
    CHECK(max_abs(low + low.transpose()) <= 1e-14);
    CHECK(std::abs(low(0, 1) - f.B) <= 4e-16 * std::abs(f.B));
    const Matrix4C map = f.as_map();
    CHECK((map * epsilon() - (I * f.B) * epsilon()).max_abs() <= 1e-12);
    CHECK((map * epsilon_star() + (I * f.B) * epsilon_star()).max_abs() <= 1e-12);
    CHECK((map * wave_vector()).max_abs() == 0.0);
    CHECK((map * LorentzVector(0, 0, 1.3, -0.2)).max_abs() == 0.0);
  }
}

TEST_CASE("built-in profiles") {
  const auto circ = make_profile(ProfileKind::circular, {1.0, 1.0, 0.0, {}, {}, {}});
  CHECK((circ.potential(0.0) - LorentzVector(1, 0, 0, 0)).max_abs() < 1e-15);
  const auto lin = make_profile(ProfileKind::linear, {2.0, 3.0, 0.0, {}, {}, {}});
  CHECK(lin.potential(M_PI / 6.0).max_abs() < 1e-15);
  CHECK(make_profile(ProfileKind::zero).potential(1.7).max_abs() == 0.0);
  const auto ramp = make_profile(ProfileKind::ramp, {0.5, 0.0, 0.0, {}, {}, {}});
  CHECK((ramp.derivative(3.0) - LorentzVector(0.5, 0, 0, 0)).max_abs() == 0.0);

  const auto pulse = make_profile(ProfileKind::pulse, {0.7, 1.3, 1.5, {}, {}, {}});
  for (const auto* prof : {&circ, &lin, &pulse}) {
    for (double phi : {-1.2, 0.0, 0.4, 2.5}) {
      const auto A = prof->potential(phi);
      CHECK(A[2] == 0.0);
      CHECK(A[3] == 0.0);
      CHECK(dot(wave_vector(), A) == 0.0);
      for (int mu = 0; mu < 4; ++mu) CHECK(A[mu].imag() == 0.0);
      const double h = 1e-4;
      const auto fd = (prof->potential(phi + h) - prof->potential(phi - h)) * cplx(0.5 / h);
      CHECK((fd - prof->derivative(phi)).max_abs() < 1e-7);
    }
  }
}

TEST_CASE("profile validation") {
  CHECK(error_kind_of([] { profile_kind_from_string("square"); }) == ErrorKind::invalid_profile);
  CHECK(error_kind_of([] { make_profile(ProfileKind::circular, {1.0, 0.0, 0.0, {}, {}, {}}); }) ==
        ErrorKind::invalid_profile);
  CHECK(error_kind_of([] { make_profile(ProfileKind::pulse, {1.0, 1.0, 0.0, {}, {}, {}}); }) ==
        ErrorKind::invalid_profile);
  CHECK(error_kind_of([] {
          make_profile(ProfileKind::tabulated, {0.0, 0.0, 0.0, {0.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}});
        }) == ErrorKind::invalid_profile);
  for (auto k : {ProfileKind::zero, ProfileKind::constant, ProfileKind::ramp, ProfileKind::linear,
                 ProfileKind::circular, ProfileKind::pulse, ProfileKind::tabulated}) {
    CHECK(profile_kind_from_string(to_string(k)) == k);
  }
}

TEST_CASE("tabulated profile reproduces a sampled circular wave") {
  ProfileParams p;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const double phi = -3.0 + 6.0 * i / (n - 1);
    p.table_phi.push_back(phi);
    p.table_a1.push_back(std::cos(phi));
    p.table_a2.push_back(std::sin(phi));
  }
  const auto tab = make_profile(ProfileKind::tabulated, p);
  const auto circ = make_profile(ProfileKind::circular, {1.0, 1.0, 0.0, {}, {}, {}});
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double phi = -2.5 + 5.0 * i / 1000.0;
    worst = std::max(worst, (tab.potential(phi) - circ.potential(phi)).max_abs());
  }
  CHECK(worst <= 1e-6);
  CHECK(tab.potential(3.5).max_abs() == 0.0);
}

TEST_CASE("total field tensor") {
  FieldConfig cfg;
  CHECK(max_abs(total_field_tensor(cfg, 0.3)) == 0.0);
  cfg.B = 1.4;
  CHECK(max_abs(total_field_tensor(cfg, 0.3) - cfg.tensor().lowered()) == 0.0);

  cfg.profile = make_profile(ProfileKind::circular, {0.8, 1.1, 0.0, {}, {}, {}});
  Rng rng;
  const Eigen::Vector4cd k = wave_vector().c;
  for (int i = 0; i < 10; ++i) {
    const double phi = rng(-3.0, 3.0);
    const Matrix4C F = total_field_tensor(cfg, phi);
    CHECK(max_abs(F + F.transpose()) < 1e-15);
    // k_mu g^{mu a} F_{a nu} k^nu
    cplx s = 0.0;
    const LorentzVector kl = lower(wave_vector());
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) s += kl[a] * kMetric[a] * F(a, b) * k[b];
    CHECK(std::abs(s) <= 1e-12);
  }
}
