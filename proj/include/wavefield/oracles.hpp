#pragma once

#include <array>
#include <vector>

#include "wavefield/field.hpp"
#include "wavefield/minkowski.hpp"

// Reference computations used by the tests and the verification suite.
// Nothing in here calls into kernels/classical/green: each routine re-derives
// its quantity from a different route (closed forms, brute-force Gaussians).
namespace wavefield::oracles {

struct Endpoints2D {
  double xa1 = 0.0;
  double xa2 = 0.0;
  double xb1 = 0.0;
  double xb2 = 0.0;
};

struct SliceLattice {
  int N = 8;
  Endpoints2D ends;
  cplx e0{1.0, 0.0};
  double g = 1.0;
  double B = 0.0;
};

// Time-sliced transverse path integral, evaluated exactly as a finite
// Gaussian over the N-1 interior nodes. Free part discretized per link,
// magnetic term X.f Xdot by the midpoint rule. Each link carries the free
// normalization i/(2 pi e0/N), so B = 0 telescopes to the continuum kernel.
// Throws SingularForm when the quadratic form is (numerically) singular.
cplx sliced_kernel(const SliceLattice& lat);

struct RichardsonResult {
  cplx value;
  double order = 0.0;
  std::vector<int> slices;
  std::vector<cplx> sequence;
};

// Sequence over doubling N, extrapolated with the observed order.
RichardsonResult sliced_kernel_extrapolated(const Endpoints2D& ends, cplx e0, double g, double B,
                                            const std::vector<int>& slices = {8, 16, 32, 64});

enum class KOracleKind { b_zero, constant_slope, circular_profile };

struct KOracleParams {
  double g = 1.0;
  double B = 0.0;
  double kp = 1.0;  // k.pL
  double phi0 = 0.0;
  bool sign_toggle = false;
  cplx slope{0.0, 0.0};       // eps.A' for constant_slope
  PlaneWaveProfile profile;   // b_zero / circular_profile (linear or circular kind)
};

// Closed-form antiderivatives of the K(phi) integral.
// Throws ResonantDenominator when a harmonic denominator vanishes.
cplx K_closed_form(KOracleKind kind, const KOracleParams& p, double phi);

// Closed-form driven-rotation solution of the drift ODE for the circular
// profile; phi(s) = phi_a + slope s.
Eigen::Vector4cd Y_path_circular(double tau, const Eigen::Vector4cd& Y0, double e0, double g, double B,
                                 double amplitude, double frequency, double phi_a, double slope);

// eta coefficient of the classical spin path at B = 0 with constant A'.
Eigen::Vector4cd spin_eta_constant_slope(double tau, double e0, double g, const Eigen::Vector4cd& dA);

// Free mixed-representation propagator, proper-time integrand and the
// integrated closed form (1/2pi) K0(r M) exp(i pL.dx^L), M^2 = pL.pL - m^2.
struct FreeInput {
  double dx1 = 0.0;
  double dx2 = 0.0;
  double long_phase = 0.0;  // pL.(x_b^L - x_a^L)
  double pL2 = 0.0;         // pL.pL
  double m = 1.0;
};

cplx free_integrand(cplx e0, const FreeInput& in);
cplx free_propagator_scalar(const FreeInput& in);
// d/d(dx1), d/d(dx2) of free_propagator_scalar.
std::array<cplx, 2> free_propagator_gradient(const FreeInput& in);

// Constant-field (k -> 0) integrand and its analytic x_b-gradient, slots 0..3.
struct K0Point {
  double m = 1.0;
  double g = 1.0;
  double B = 0.0;
  std::array<double, 4> x_a{};
  std::array<double, 4> x_b{};
  std::array<double, 4> pL{};  // upper-index components, slots 2,3
};

struct K0Gradient {
  Matrix4C value;
  std::array<Matrix4C, 4> d;
};

K0Gradient k_zero_integrand_gradient(cplx e0, const K0Point& p);

// Integral of k_zero_integrand_gradient along e0 = s exp(i theta), s in (0, s_max].
K0Gradient k_zero_gradient_integrated(const K0Point& p, double theta, double s_max);

// sqrt(det cosh(e0 g f / 2)) from a numerical eigendecomposition of the map.
cplx spin_determinant_eigen(double e0, double g, double B);

}  // namespace wavefield::oracles
