#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "wavefield/errors.hpp"

namespace wavefield {

enum class Execution { serial, parallel };

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_nodes = 100000;
  int initial_panels = 1;
  Execution execution = Execution::serial;
};

template <class T>
struct QuadratureResult {
  T value;
  double error = 0.0;
  std::size_t nodes = 0;
};

namespace detail {

// Kronrod 15-point nodes/weights and the embedded 7-point Gauss weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr int kNodesPerPanel = 15;

// Flat double view of the value types we integrate.
inline double* scalars(double& v) { return &v; }
inline double* scalars(std::complex<double>& v) { return reinterpret_cast<double*>(&v); }
template <class Derived>
double* scalars(Eigen::PlainObjectBase<Derived>& v) {
  return reinterpret_cast<double*>(v.data());
}

template <class T>
constexpr int scalar_count() {
  if constexpr (std::is_same_v<T, double>) {
    return 1;
  } else if constexpr (std::is_same_v<T, std::complex<double>>) {
    return 2;
  } else {
    return 2 * T::SizeAtCompileTime;
  }
}

template <class T>
T zero_value() {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::complex<double>>) {
    return T(0);
  } else {
    return T::Zero();
  }
}

template <class T>
double norm_of(const T& v) {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::complex<double>>) {
    return std::abs(v);
  } else {
    return v.cwiseAbs().maxCoeff();
  }
}

// Neumaier-compensated accumulation over every real scalar of T.
template <class T>
class CompensatedSum {
 public:
  CompensatedSum() : sum_(zero_value<T>()), comp_(zero_value<T>()) {}

  void add(T v) {
    double* s = scalars(sum_);
    double* c = scalars(comp_);
    const double* x = scalars(v);
    for (int i = 0; i < scalar_count<T>(); ++i) {
      const double t = s[i] + x[i];
      if (std::abs(s[i]) >= std::abs(x[i])) {
        c[i] += (s[i] - t) + x[i];
      } else {
        c[i] += (x[i] - t) + s[i];
      }
      s[i] = t;
    }
  }

  T result() const {
    T out = sum_;
    T c = comp_;
    double* o = scalars(out);
    const double* cc = scalars(c);
    for (int i = 0; i < scalar_count<T>(); ++i) o[i] += cc[i];
    return out;
  }

 private:
  T sum_;
  T comp_;
};

template <class T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value;
  double error = 0.0;
  bool evaluated = false;
};

template <class T, class F>
void evaluate_panel(F& f, Panel<T>& p) {
  const double center = 0.5 * (p.a + p.b);
  const double half = 0.5 * (p.b - p.a);
  T fc = f(center);
  T kron = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    T f1 = f(center - dx);
    T f2 = f(center + dx);
    T s = f1 + f2;
    kron += s * kWgk[j];
    if (j % 2 == 1) gauss += s * kWg[j / 2];
  }
  p.value = kron * half;
  p.error = norm_of<T>(T((kron - gauss) * half));
  p.evaluated = true;
}

}  // namespace detail

// Adaptive G7/K15 integration of f over [a, b] (b < a allowed).
//
// Refinement is round-synchronous: every panel created in a round is
// evaluated (in parallel under Execution::parallel), then panels whose error
// exceeds their width-share of the tolerance are bisected. The partition and
// the summation order depend only on integrand values, so serial and parallel
// runs return bit-identical results. f must be safe to call concurrently.
template <class T, class F>
QuadratureResult<T> integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  using detail::Panel;
  QuadratureResult<T> out{detail::zero_value<T>(), 0.0, 0};
  if (a == b) return out;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double length = hi - lo;

  const int n0 = std::max(1, opt.initial_panels);
  std::vector<Panel<T>> panels(static_cast<std::size_t>(n0));
  for (int i = 0; i < n0; ++i) {
    panels[i].a = lo + length * i / n0;
    panels[i].b = (i + 1 == n0) ? hi : lo + length * (i + 1) / n0;
    panels[i].value = detail::zero_value<T>();
  }

  std::size_t nodes = 0;
  std::vector<std::size_t> pending(panels.size());
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;

  while (true) {
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(pending.size());
    std::vector<std::exception_ptr> failures(pending.size());
    if (opt.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
          detail::evaluate_panel<T>(f, panels[pending[i]]);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    } else {
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
          detail::evaluate_panel<T>(f, panels[pending[i]]);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    }
    for (auto& e : failures) {
      if (e) std::rethrow_exception(e);
    }
    nodes += pending.size() * detail::kNodesPerPanel;

    detail::CompensatedSum<T> total;
    double err = 0.0;
    for (const auto& p : panels) {
      total.add(p.value);
      err += p.error;
    }
    const T value = total.result();
    const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::norm_of<T>(value));
    if (err <= tol) {
      out.value = value * sign;
      out.error = err;
      out.nodes = nodes;
      return out;
    }

    std::vector<bool> split(panels.size(), false);
    std::size_t worst = 0;
    std::size_t n_split = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& p = panels[i];
      if (p.error > panels[worst].error) worst = i;
      if (p.error > tol * (p.b - p.a) / length) {
        split[i] = true;
        ++n_split;
      }
    }
    if (n_split == 0) {
      split[worst] = true;
      n_split = 1;
    }
    const bool degenerate = 0.5 * (panels[worst].b - panels[worst].a) <=
                            16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(panels[worst].a));
    if (nodes + 2 * n_split * detail::kNodesPerPanel > opt.max_nodes || degenerate) {
      throw Error(ErrorKind::quadrature_failure,
                  "tolerance " + std::to_string(tol) + " not reached (error " + std::to_string(err) + ", " +
                      std::to_string(nodes) + " nodes); worst panel [" + std::to_string(panels[worst].a) + ", " +
                      std::to_string(panels[worst].b) + "]");
    }

    std::vector<Panel<T>> next;
    next.reserve(panels.size() + n_split);
    pending.clear();
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (!split[i]) {
        next.push_back(panels[i]);
        continue;
      }
      const double mid = 0.5 * (panels[i].a + panels[i].b);
      Panel<T> left{panels[i].a, mid, detail::zero_value<T>(), 0.0, false};
      Panel<T> right{mid, panels[i].b, detail::zero_value<T>(), 0.0, false};
      pending.push_back(next.size());
      next.push_back(left);
      pending.push_back(next.size());
      next.push_back(right);
    }
    panels = std::move(next);
  }
}

}  // namespace wavefield
