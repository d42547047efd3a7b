#include "wavefield/minkowski.hpp"

#include <cmath>

#include "wavefield/errors.hpp"

namespace wavefield {

namespace {

const cplx kI(0.0, 1.0);

Matrix4C pauli_block(int k, bool lower_sign) {
  // [[0, s_k], [-s_k, 0]] for the spatial Dirac gammas.
  Eigen::Matrix2cd s;
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  Matrix4C m = Matrix4C::Zero();
  m.block<2, 2>(0, 2) = s;
  m.block<2, 2>(2, 0) = lower_sign ? Eigen::Matrix2cd(-s) : s;
  return m;
}

}  // namespace

cplx dot(const LorentzVector& u, const LorentzVector& v) {
  cplx s = 0.0;
  for (int mu = 0; mu < 4; ++mu) s += kMetric[mu] * u[mu] * v[mu];
  return s;
}

LorentzVector lower(const LorentzVector& v) {
  LorentzVector out;
  for (int mu = 0; mu < 4; ++mu) out[mu] = kMetric[mu] * v[mu];
  return out;
}

LorentzVector epsilon() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, cplx(0.0, r), 0.0, 0.0};
}

LorentzVector epsilon_star() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, cplx(0.0, -r), 0.0, 0.0};
}

LorentzVector wave_vector() { return {0.0, 0.0, -1.0, -1.0}; }

LorentzVector unit_e1() { return {1.0, 0.0, 0.0, 0.0}; }

LorentzVector unit_e2() { return {0.0, 1.0, 0.0, 0.0}; }

LorentzVector transverse_project(const LorentzVector& x) {
  const LorentzVector e = epsilon();
  const LorentzVector es = epsilon_star();
  return dot(es, x) * e + dot(e, x) * es;
}

LorentzVector longitudinal_part(const LorentzVector& x) { return x - transverse_project(x); }

Matrix4C outer_dot(const LorentzVector& u, const LorentzVector& w) {
  return u.c * lower(w).c.transpose();
}

GammaBasis build_gamma() {
  Matrix4C dirac0 = Matrix4C::Zero();
  dirac0.diagonal() << 1, 1, -1, -1;
  const Matrix4C dirac1 = pauli_block(1, true);
  const Matrix4C dirac2 = pauli_block(2, true);
  const Matrix4C dirac3 = pauli_block(3, true);

  GammaBasis b;
  b.gamma[0] = kI * dirac1;
  b.gamma[1] = kI * dirac2;
  b.gamma[2] = kI * dirac0;
  b.gamma[3] = kI * dirac3;
  return b;
}

const GammaBasis& gammas() {
  static const GammaBasis basis = build_gamma();
  return basis;
}

Matrix4C anticommutator(const Matrix4C& a, const Matrix4C& b) { return a * b + b * a; }

Matrix4C slash(const LorentzVector& v, const GammaBasis& basis) {
  Matrix4C out = Matrix4C::Zero();
  for (int mu = 0; mu < 4; ++mu) out += basis[mu] * (kMetric[mu] * v[mu]);
  return out;
}

Matrix4C projector_plus(const GammaBasis& basis) {
  return 0.5 * slash(epsilon(), basis) * slash(epsilon_star(), basis);
}

Matrix4C projector_minus(const GammaBasis& basis) {
  return 0.5 * slash(epsilon_star(), basis) * slash(epsilon(), basis);
}

IdentityPair check_identity_42(cplx alpha, const GammaBasis& basis) {
  const cplx half = 0.5 * alpha;
  const cplx c = std::cosh(half);
  if (std::abs(c) < 1e-12) throw Error(ErrorKind::pole, "cosh(alpha/2) vanishes");

  const Matrix4C ee = slash(epsilon(), basis) * slash(epsilon_star(), basis);  // gamma gamma eps eps*
  const Matrix4C ese = slash(epsilon_star(), basis) * slash(epsilon(), basis);
  const cplx em = std::exp(-half);
  const cplx ep = std::exp(half);

  IdentityPair out;
  out.lhs = Matrix4C::Identity() - 0.5 * (std::sinh(half) / c) * (ee - ese);
  out.rhs = (em / (em + ep)) * ee + (ep / (em + ep)) * ese;
  return out;
}

double max_abs(const Matrix4C& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace wavefield
