#include "wavefield/field.hpp"

#include <algorithm>
#include <cmath>

#include "wavefield/errors.hpp"

namespace wavefield {

Matrix4C ConstantFieldTensor::lowered() const {
  const LorentzVector e = lower(epsilon());
  const LorentzVector es = lower(epsilon_star());
  const Eigen::Matrix4cd t = e.c * es.c.transpose() - es.c * e.c.transpose();
  return cplx(0.0, B) * t;
}

Matrix4C ConstantFieldTensor::as_map() const {
  Matrix4C m = lowered();
  for (int mu = 0; mu < 4; ++mu) m.row(mu) *= kMetric[mu];
  return m;
}

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::constant: return "constant";
    case ProfileKind::ramp: return "ramp";
    case ProfileKind::linear: return "linear";
    case ProfileKind::circular: return "circular";
    case ProfileKind::pulse: return "pulse";
    case ProfileKind::tabulated: return "tabulated";
  }
  return "zero";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  for (auto k : {ProfileKind::zero, ProfileKind::constant, ProfileKind::ramp, ProfileKind::linear,
                 ProfileKind::circular, ProfileKind::pulse, ProfileKind::tabulated}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::invalid_profile, "unknown profile kind '" + name + "'");
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw Error(ErrorKind::invalid_profile, "spline needs >= 2 matching knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw Error(ErrorKind::invalid_profile, "spline grid must be strictly increasing");
  }
  if (n == 2) return;

  // Tridiagonal solve for interior second derivatives, natural ends.
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double h0 = x_[i + 1] - x_[i];
    const double h1 = x_[i + 2] - x_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double w = upper[i - 1] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m_[i + 1] = (rhs[i] - upper[i] * m_[i + 2]) / diag[i];
}

std::size_t NaturalCubicSpline::segment(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, x_.size() - 2);
}

double NaturalCubicSpline::value(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double NaturalCubicSpline::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

std::array<double, 2> PlaneWaveProfile::components(double phi) const {
  const double a = params_.amplitude;
  const double nu = params_.frequency;
  switch (kind_) {
    case ProfileKind::zero: return {0.0, 0.0};
    case ProfileKind::constant: return {a, 0.0};
    case ProfileKind::ramp: return {a * phi, 0.0};
    case ProfileKind::linear: return {a * std::cos(nu * phi), 0.0};
    case ProfileKind::circular: return {a * std::cos(nu * phi), a * std::sin(nu * phi)};
    case ProfileKind::pulse: {
      const double env = std::exp(-phi * phi / (2.0 * params_.sigma * params_.sigma));
      return {a * env * std::cos(nu * phi), a * env * std::sin(nu * phi)};
    }
    case ProfileKind::tabulated:
      if (phi < spline1_->lo() || phi > spline1_->hi()) return {0.0, 0.0};
      return {spline1_->value(phi), spline2_->value(phi)};
  }
  return {0.0, 0.0};
}

std::array<double, 2> PlaneWaveProfile::derivative_components(double phi) const {
  const double a = params_.amplitude;
  const double nu = params_.frequency;
  switch (kind_) {
    case ProfileKind::zero:
    case ProfileKind::constant:
      return {0.0, 0.0};
    case ProfileKind::ramp: return {a, 0.0};
    case ProfileKind::linear: return {-a * nu * std::sin(nu * phi), 0.0};
    case ProfileKind::circular: return {-a * nu * std::sin(nu * phi), a * nu * std::cos(nu * phi)};
    case ProfileKind::pulse: {
      const double s2 = params_.sigma * params_.sigma;
      const double env = std::exp(-phi * phi / (2.0 * s2));
      const double denv = -phi / s2 * env;
      const double c = std::cos(nu * phi);
      const double s = std::sin(nu * phi);
      return {a * (denv * c - env * nu * s), a * (denv * s + env * nu * c)};
    }
    case ProfileKind::tabulated:
      if (phi < spline1_->lo() || phi > spline1_->hi()) return {0.0, 0.0};
      return {spline1_->derivative(phi), spline2_->derivative(phi)};
  }
  return {0.0, 0.0};
}

LorentzVector PlaneWaveProfile::potential(double phi) const {
  const auto a = components(phi);
  return {a[0], a[1], 0.0, 0.0};
}

LorentzVector PlaneWaveProfile::derivative(double phi) const {
  const auto a = derivative_components(phi);
  return {a[0], a[1], 0.0, 0.0};
}

PlaneWaveProfile make_profile(ProfileKind kind, const ProfileParams& params) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorKind::invalid_profile, msg);
  };
  PlaneWaveProfile p;
  p.kind_ = kind;
  p.params_ = params;
  switch (kind) {
    case ProfileKind::zero:
      break;
    case ProfileKind::constant:
    case ProfileKind::ramp:
      require(std::isfinite(params.amplitude), "amplitude must be finite");
      break;
    case ProfileKind::linear:
    case ProfileKind::circular:
      require(std::isfinite(params.amplitude), "amplitude must be finite");
      require(std::isfinite(params.frequency) && params.frequency > 0.0, "frequency must be > 0");
      break;
    case ProfileKind::pulse:
      require(std::isfinite(params.amplitude), "amplitude must be finite");
      require(std::isfinite(params.frequency) && params.frequency > 0.0, "frequency must be > 0");
      require(std::isfinite(params.sigma) && params.sigma > 0.0, "sigma must be > 0");
      break;
    case ProfileKind::tabulated: {
      const auto n = params.table_phi.size();
      require(n >= 2, "tabulated profile needs at least 2 rows");
      require(params.table_a1.size() == n && params.table_a2.size() == n, "table columns differ in length");
      for (std::size_t i = 0; i < n; ++i) {
        require(std::isfinite(params.table_phi[i]) && std::isfinite(params.table_a1[i]) &&
                    std::isfinite(params.table_a2[i]),
                "table entries must be finite");
      }
      p.spline1_ = std::make_shared<NaturalCubicSpline>(params.table_phi, params.table_a1);
      p.spline2_ = std::make_shared<NaturalCubicSpline>(params.table_phi, params.table_a2);
      break;
    }
  }
  return p;
}

Matrix4C plane_wave_tensor(const PlaneWaveProfile& profile, double phi) {
  const Eigen::Vector4cd k = lower(wave_vector()).c;
  const Eigen::Vector4cd a = lower(profile.derivative(phi)).c;
  return k * a.transpose() - a * k.transpose();
}

Matrix4C total_field_tensor(const FieldConfig& cfg, double phi) {
  return cfg.tensor().lowered() + plane_wave_tensor(cfg.profile, phi);
}

}  // namespace wavefield
