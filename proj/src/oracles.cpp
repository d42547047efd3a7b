#include "wavefield/oracles.hpp"

#include <cmath>
#include <numbers>

#include "wavefield/errors.hpp"
#include "wavefield/quadrature.hpp"

namespace wavefield::oracles {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

}  // namespace

cplx sliced_kernel(const SliceLattice& lat) {
  if (lat.N < 2) throw Error(ErrorKind::range, "slice lattice needs N >= 2");
  const int N = lat.N;
  const int nodes = N + 1;
  const int dim = 2 * nodes;
  const double eps = 1.0 / N;
  const double gB = lat.g * lat.B;

  // Full quadratic form S = 1/2 w^T H w over all node coordinates.
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx kin = -1.0 / (lat.e0 * eps);
  for (int j = 0; j < N; ++j) {
    const int u = 2 * j;
    const int v = 2 * (j + 1);
    for (int c = 0; c < 2; ++c) {
      H(u + c, u + c) += kin;
      H(v + c, v + c) += kin;
      H(u + c, v + c) -= kin;
      H(v + c, u + c) -= kin;
    }
    // -(gB/2) (u1 v2 - u2 v1)
    H(u + 0, v + 1) += -0.5 * gB;
    H(v + 1, u + 0) += -0.5 * gB;
    H(u + 1, v + 0) += 0.5 * gB;
    H(v + 0, u + 1) += 0.5 * gB;
  }

  const int n = 2 * (N - 1);
  Eigen::VectorXcd w_b(4);
  w_b << lat.ends.xa1, lat.ends.xa2, lat.ends.xb1, lat.ends.xb2;
  auto boundary_index = [&](int k) { return k < 2 ? k : dim - 4 + k; };

  Eigen::MatrixXcd H_ii = H.block(2, 2, n, n);
  Eigen::MatrixXcd H_ib(n, 4);
  Eigen::MatrixXcd H_bb(4, 4);
  for (int k = 0; k < 4; ++k) {
    H_ib.col(k) = H.block(2, boundary_index(k), n, 1);
    for (int l = 0; l < 4; ++l) H_bb(k, l) = H(boundary_index(k), boundary_index(l));
  }
  const cplx S0 = 0.5 * (w_b.transpose() * H_bb * w_b)(0, 0);
  const Eigen::VectorXcd h = H_ib * w_b;

  // exp(iS) = exp(-1/2 z^T M z + J^T z + i S0), M = -iH, J = ih
  const Eigen::MatrixXcd M = -kI * H_ii;
  const Eigen::VectorXcd J = kI * h;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(M, false);
  const Eigen::VectorXcd lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  cplx log_det = 0.0;
  for (int k = 0; k < n; ++k) {
    if (std::abs(lambda[k]) < 1e-12 * scale) {
      throw Error(ErrorKind::singular_form, "sliced quadratic form is singular");
    }
    log_det += std::log(lambda[k]);
  }
  const Eigen::VectorXcd Minv_J = M.partialPivLu().solve(J);
  const cplx stationary = 0.5 * (J.transpose() * Minv_J)(0, 0);

  const cplx link_norm = kI / (2.0 * kPi * lat.e0 * eps);
  const cplx log_value = static_cast<double>(N) * std::log(link_norm) +
                         0.5 * n * std::log(2.0 * kPi) - 0.5 * log_det + stationary + kI * S0;
  return std::exp(log_value);
}

RichardsonResult sliced_kernel_extrapolated(const Endpoints2D& ends, cplx e0, double g, double B,
                                            const std::vector<int>& slices) {
  if (slices.size() < 3) throw Error(ErrorKind::range, "Richardson extrapolation needs >= 3 slice counts");
  RichardsonResult out;
  out.slices = slices;
  for (int N : slices) out.sequence.push_back(sliced_kernel({N, ends, e0, g, B}));

  const std::size_t n = out.sequence.size();
  const cplx d1 = out.sequence[n - 2] - out.sequence[n - 3];
  const cplx d2 = out.sequence[n - 1] - out.sequence[n - 2];
  const double ratio = static_cast<double>(slices[n - 1]) / slices[n - 2];
  if (std::abs(d2) == 0.0 || std::abs(d1) == 0.0) {
    out.order = std::numeric_limits<double>::infinity();
    out.value = out.sequence.back();
    return out;
  }
  out.order = std::log(std::abs(d1) / std::abs(d2)) / std::log(ratio);
  const double p = std::clamp(out.order, 1.0, 6.0);
  out.value = out.sequence.back() + d2 / (std::pow(ratio, p) - 1.0);
  return out;
}

cplx K_closed_form(KOracleKind kind, const KOracleParams& p, double phi) {
  const double beta = p.g * p.B / p.kp;
  const double s = p.sign_toggle ? -1.0 : 1.0;
  const cplx pref = p.g / (2.0 * p.kp);
  const LorentzVector e = epsilon();

  switch (kind) {
    case KOracleKind::b_zero: {
      const LorentzVector dA = p.profile.potential(phi) - p.profile.potential(p.phi0);
      return pref * dot(e, dA);
    }
    case KOracleKind::constant_slope: {
      if (beta == 0.0) return pref * p.slope * (phi - p.phi0);
      const double sb = s * beta;
      return pref * p.slope * std::exp(kI * (beta * phi)) *
             (std::exp(kI * (sb * phi)) - std::exp(kI * (sb * p.phi0))) / (kI * sb);
    }
    case KOracleKind::circular_profile: {
      // eps.A' as a sum of c_j exp(i nu_j phi)
      const double a = p.profile.params().amplitude;
      const double nu = p.profile.params().frequency;
      const double r = 1.0 / std::sqrt(2.0);
      std::vector<std::pair<cplx, double>> terms;
      if (p.profile.kind() == ProfileKind::circular) {
        terms.push_back({kI * (a * nu * r), nu});
      } else if (p.profile.kind() == ProfileKind::linear) {
        terms.push_back({kI * (0.5 * a * nu * r), nu});
        terms.push_back({-kI * (0.5 * a * nu * r), -nu});
      } else {
        throw Error(ErrorKind::invalid_profile, "harmonic K oracle needs a linear or circular profile");
      }
      cplx sum = 0.0;
      for (const auto& [c, w] : terms) {
        const double q = s * beta + w;
        if (std::abs(q) < 1e-9) throw Error(ErrorKind::resonant_denominator, "beta +/- nu vanishes");
        sum += c * (std::exp(kI * (q * phi)) - std::exp(kI * (q * p.phi0))) / (kI * q);
      }
      return pref * std::exp(kI * (beta * phi)) * sum;
    }
  }
  return 0.0;
}

Eigen::Vector4cd Y_path_circular(double tau, const Eigen::Vector4cd& Y0, double e0, double g, double B,
                                 double amplitude, double frequency, double phi_a, double slope) {
  const double w = e0 * g * B;
  const double r = 1.0 / std::sqrt(2.0);
  const double q = w + frequency * slope;
  if (std::abs(q) < 1e-12) throw Error(ErrorKind::resonant_denominator, "driven rotation is resonant");
  // Components along eps and eps*: Y = eps y_p + eps* y_m
  const cplx yp0 = r * (Y0[0] - kI * Y0[1]);
  const cplx ym0 = r * (Y0[0] + kI * Y0[1]);
  const cplx C = e0 * g * amplitude * r * std::exp(-kI * (frequency * phi_a)) / (kI * q);
  const cplx D = -e0 * g * amplitude * r * std::exp(kI * (frequency * phi_a)) / (kI * q);
  const cplx yp = (yp0 - C) * std::exp(kI * (w * tau)) + C * std::exp(-kI * (frequency * slope * tau));
  const cplx ym = (ym0 - D) * std::exp(-kI * (w * tau)) + D * std::exp(kI * (frequency * slope * tau));
  Eigen::Vector4cd Y = Eigen::Vector4cd::Zero();
  Y[0] = r * (yp + ym);
  Y[1] = r * kI * (yp - ym);
  return Y;
}

Eigen::Vector4cd spin_eta_constant_slope(double tau, double e0, double g, const Eigen::Vector4cd& dA) {
  return (e0 * g * (0.5 - tau)) * dA;
}

cplx free_integrand(cplx e0, const FreeInput& in) {
  const double r2 = in.dx1 * in.dx1 + in.dx2 * in.dx2;
  const cplx expo = -kI * r2 / (2.0 * e0) + kI * in.long_phase + kI * 0.5 * e0 * (in.pL2 - in.m * in.m);
  return cplx(0.0, -0.5) * (kI / (2.0 * kPi * e0)) * std::exp(expo);
}

cplx free_propagator_scalar(const FreeInput& in) {
  const double r = std::hypot(in.dx1, in.dx2);
  const double M = std::sqrt(in.pL2 - in.m * in.m);
  return std::cyl_bessel_k(0.0, M * r) / (2.0 * kPi) * std::exp(kI * in.long_phase);
}

std::array<cplx, 2> free_propagator_gradient(const FreeInput& in) {
  const double r = std::hypot(in.dx1, in.dx2);
  const double M = std::sqrt(in.pL2 - in.m * in.m);
  const cplx radial = -M * std::cyl_bessel_k(1.0, M * r) / (2.0 * kPi) * std::exp(kI * in.long_phase);
  return {radial * (in.dx1 / r), radial * (in.dx2 / r)};
}

K0Gradient k_zero_integrand_gradient(cplx e0, const K0Point& p) {
  const double gB = p.g * p.B;
  const double d1 = p.x_b[0] - p.x_a[0];
  const double d2 = p.x_b[1] - p.x_a[1];
  const double r2 = d1 * d1 + d2 * d2;

  cplx prefactor;
  cplx exponent;
  std::array<cplx, 2> dexp;
  if (gB == 0.0) {
    prefactor = kI / (2.0 * kPi * e0);
    exponent = -kI * r2 / (2.0 * e0);
    dexp = {-kI * d1 / e0, -kI * d2 / e0};
  } else {
    const cplx half = 0.5 * e0 * gB;
    const cplx cot = 1.0 / std::tan(half);
    prefactor = kI * gB / (4.0 * kPi * std::sin(half));
    exponent = kI * (0.5 * gB) * ((p.x_b[0] * p.x_a[1] - p.x_b[1] * p.x_a[0]) - 0.5 * cot * r2);
    dexp = {kI * (0.5 * gB) * (p.x_a[1] - cot * d1), kI * (0.5 * gB) * (-p.x_a[0] - cot * d2)};
  }
  // pL.dx^L with the metric written out for slots 2, 3
  const double pl_dx = -p.pL[2] * (p.x_b[2] - p.x_a[2]) + p.pL[3] * (p.x_b[3] - p.x_a[3]);
  const double pL2 = -p.pL[2] * p.pL[2] + p.pL[3] * p.pL[3];
  exponent += kI * pl_dx + kI * 0.5 * e0 * (pL2 - p.m * p.m);

  const cplx ph = kI * (0.5 * e0 * gB);
  const Matrix4C braces = std::exp(ph) * projector_plus() + std::exp(-ph) * projector_minus();
  K0Gradient out;
  out.value = (cplx(0.0, -0.5) * prefactor * std::exp(exponent)) * braces;
  out.d[0] = dexp[0] * out.value;
  out.d[1] = dexp[1] * out.value;
  out.d[2] = (kI * -p.pL[2]) * out.value;
  out.d[3] = (kI * p.pL[3]) * out.value;
  return out;
}

K0Gradient k_zero_gradient_integrated(const K0Point& p, double theta, double s_max) {
  using Block = Eigen::Matrix<cplx, 4, 20>;
  const cplx dir = std::exp(kI * theta);
  auto f = [&](double s) -> Block {
    const K0Gradient g = k_zero_integrand_gradient(s * dir, p);
    Block b;
    b.block<4, 4>(0, 0) = g.value * dir;
    for (int mu = 0; mu < 4; ++mu) b.block<4, 4>(0, 4 * (mu + 1)) = g.d[mu] * dir;
    return b;
  };
  QuadratureOptions opt{1e-13, 1e-11, 200000, 16, Execution::serial};
  const Block b = integrate<Block>(f, 0.0, s_max, opt).value;
  K0Gradient out;
  out.value = b.block<4, 4>(0, 0);
  for (int mu = 0; mu < 4; ++mu) out.d[mu] = b.block<4, 4>(0, 4 * (mu + 1));
  return out;
}

cplx spin_determinant_eigen(double e0, double g, double B) {
  // (f x)^0 = B x^1, (f x)^1 = -B x^0, longitudinal slots untouched
  Eigen::Matrix4cd F = Eigen::Matrix4cd::Zero();
  F(0, 1) = B;
  F(1, 0) = -B;
  const Eigen::Matrix4cd arg = (0.5 * e0 * g) * F;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> eig(arg, false);
  cplx det = 1.0;
  for (int k = 0; k < 4; ++k) det *= std::cosh(eig.eigenvalues()[k]);
  return std::sqrt(det);
}

}  // namespace wavefield::oracles
