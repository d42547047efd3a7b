#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wavefield/minkowski.hpp"

namespace wavefield {

// f_{mu nu} = iB (eps_mu eps*_nu - eps_nu eps*_mu), index-lowered.
struct ConstantFieldTensor {
  double B = 0.0;

  Matrix4C lowered() const;
  // (f x)^mu = g^{mu a} f_{a nu} x^nu
  Matrix4C as_map() const;
};

enum class ProfileKind { zero, constant, ramp, linear, circular, pulse, tabulated };

const char* to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

struct ProfileParams {
  double amplitude = 0.0;
  double frequency = 0.0;
  double sigma = 0.0;
  // tabulated: rows of (phi, A1, A2), A1/A2 along e1/e2.
  std::vector<double> table_phi;
  std::vector<double> table_a1;
  std::vector<double> table_a2;
};

class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  double value(double t) const;
  double derivative(double t) const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

// Transverse plane-wave potential A^p(phi) = A1(phi) e1 + A2(phi) e2.
//   zero      0
//   constant  a e1
//   ramp      a phi e1
//   linear    a cos(nu phi) e1
//   circular  a (cos(nu phi) e1 + sin(nu phi) e2)
//   pulse     circular * exp(-phi^2 / (2 sigma^2))
//   tabulated natural cubic spline through (phi, A1, A2), zero outside the table
class PlaneWaveProfile {
 public:
  PlaneWaveProfile() = default;

  ProfileKind kind() const { return kind_; }
  const ProfileParams& params() const { return params_; }
  bool is_zero() const { return kind_ == ProfileKind::zero; }

  // Transverse components (A1, A2) and their phi-derivatives.
  std::array<double, 2> components(double phi) const;
  std::array<double, 2> derivative_components(double phi) const;

  LorentzVector potential(double phi) const;
  LorentzVector derivative(double phi) const;

  friend PlaneWaveProfile make_profile(ProfileKind kind, const ProfileParams& params);

 private:
  ProfileKind kind_ = ProfileKind::zero;
  ProfileParams params_;
  std::shared_ptr<const NaturalCubicSpline> spline1_;
  std::shared_ptr<const NaturalCubicSpline> spline2_;
};

// Throws InvalidProfile on malformed parameters.
PlaneWaveProfile make_profile(ProfileKind kind, const ProfileParams& params = {});

struct FieldConfig {
  double g = 1.0;
  double B = 0.0;
  PlaneWaveProfile profile;
  // Lower limit of the K(phi) integral; unset means "phi_a of the evaluation".
  std::optional<double> phi0;
  // Flips the sign of the integrand exponential in K(phi).
  bool profile_sign_toggle = false;

  ConstantFieldTensor tensor() const { return {B}; }
};

// F_{mu nu}(phi) = f_{mu nu} + k_mu A'_nu(phi) - k_nu A'_mu(phi)
Matrix4C total_field_tensor(const FieldConfig& cfg, double phi);

// Plane-wave part k_mu A'_nu - k_nu A'_mu alone.
Matrix4C plane_wave_tensor(const PlaneWaveProfile& profile, double phi);

}  // namespace wavefield
