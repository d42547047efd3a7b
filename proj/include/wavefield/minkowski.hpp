#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace wavefield {

using cplx = std::complex<double>;
using Matrix4C = Eigen::Matrix4cd;

// Diagonal metric g = diag(+1, +1, -1, +1). Slots 0,1 are transverse, 2,3
// longitudinal. The longitudinal sign placement is a convention; every
// printed identity (eps.eps = 0, eps.eps* = 1, k.k = 0, k.eps = 0) holds
// with this choice.
inline constexpr std::array<double, 4> kMetric = {1.0, 1.0, -1.0, 1.0};

// Four complex components in slot order. Components are stored with an
// upper index; `dot` and `lower` apply the metric.
struct LorentzVector {
  Eigen::Vector4cd c = Eigen::Vector4cd::Zero();

  LorentzVector() = default;
  explicit LorentzVector(const Eigen::Vector4cd& v) : c(v) {}
  LorentzVector(cplx c0, cplx c1, cplx c2, cplx c3) { c << c0, c1, c2, c3; }

  cplx& operator[](int mu) { return c[mu]; }
  const cplx& operator[](int mu) const { return c[mu]; }

  LorentzVector& operator+=(const LorentzVector& o) { c += o.c; return *this; }
  LorentzVector& operator-=(const LorentzVector& o) { c -= o.c; return *this; }
  LorentzVector& operator*=(cplx s) { c *= s; return *this; }

  friend LorentzVector operator+(LorentzVector a, const LorentzVector& b) { return a += b; }
  friend LorentzVector operator-(LorentzVector a, const LorentzVector& b) { return a -= b; }
  friend LorentzVector operator-(LorentzVector a) { a.c = -a.c; return a; }
  friend LorentzVector operator*(cplx s, LorentzVector a) { return a *= s; }
  friend LorentzVector operator*(LorentzVector a, cplx s) { return a *= s; }
  friend LorentzVector operator*(const Matrix4C& m, const LorentzVector& v) {
    return LorentzVector(Eigen::Vector4cd(m * v.c));
  }

  double max_abs() const { return c.cwiseAbs().maxCoeff(); }
};

// Bilinear (no conjugation) scalar product u.v = sum_mu g_mumu u^mu v^mu.
cplx dot(const LorentzVector& u, const LorentzVector& v);

// Index lowering v_mu = g_mumu v^mu.
LorentzVector lower(const LorentzVector& v);

LorentzVector epsilon();       // (1, i, 0, 0)/sqrt(2)
LorentzVector epsilon_star();  // (1, -i, 0, 0)/sqrt(2)
LorentzVector wave_vector();   // k = (0, 0, -1, -1)
LorentzVector unit_e1();       // (eps + eps*)/sqrt(2) = (1, 0, 0, 0)
LorentzVector unit_e2();       // (eps - eps*)/(i sqrt(2)) = (0, 1, 0, 0)

// x^T = eps (eps*.x) + eps* (eps.x)
LorentzVector transverse_project(const LorentzVector& x);
LorentzVector longitudinal_part(const LorentzVector& x);

// Matrix form of x -> u (w.x), i.e. entries u^mu g_nunu w^nu.
Matrix4C outer_dot(const LorentzVector& u, const LorentzVector& w);

struct GammaBasis {
  std::array<Matrix4C, 4> gamma;

  const Matrix4C& operator[](int mu) const { return gamma[mu]; }
};

// Clifford basis for kMetric, built from the standard Dirac representation
// gt^0..gt^3 as gamma^0 = i gt^1, gamma^1 = i gt^2, gamma^2 = i gt^0,
// gamma^3 = i gt^3.
GammaBasis build_gamma();

// Process-wide instance of build_gamma().
const GammaBasis& gammas();

Matrix4C anticommutator(const Matrix4C& a, const Matrix4C& b);

// gamma^mu v_mu
Matrix4C slash(const LorentzVector& v, const GammaBasis& basis = gammas());

// P+ = slash(eps) slash(eps*)/2, P- = slash(eps*) slash(eps)/2
Matrix4C projector_plus(const GammaBasis& basis = gammas());
Matrix4C projector_minus(const GammaBasis& basis = gammas());

struct IdentityPair {
  Matrix4C lhs;
  Matrix4C rhs;
};

// Both sides of
//   1 - tanh(a/2)/2 gamma gamma (eps eps* - eps* eps)
//     = e^{-a/2}/(e^{-a/2}+e^{a/2}) gamma gamma eps eps*
//     + e^{a/2}/(e^{-a/2}+e^{a/2}) gamma gamma eps* eps.
// Throws PoleError when cosh(a/2) vanishes.
IdentityPair check_identity_42(cplx alpha, const GammaBasis& basis = gammas());

double max_abs(const Matrix4C& m);

}  // namespace wavefield
