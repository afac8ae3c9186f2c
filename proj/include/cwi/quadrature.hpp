#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "cwi/common.hpp"

namespace cwi {

namespace detail {

// Gauss-Kronrod 7-15 on [-1,1]; the embedded Gauss rule drives the error
// estimate.
inline constexpr std::array<double, 8> kGK15Nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kGK15Weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kG7Weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double x = h * kGK15Nodes[k];
    const double fv = (k == 7) ? f(c) : f(c - x) + f(c + x);
    resk += kGK15Weights[k] * fv;
    if (k % 2 == 1) resg += kG7Weights[k / 2] * fv;
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

template <typename F>
inline double adapt(const F& f, double a, double b, double tol, int depth) {
  double v, e;
  gk15(f, a, b, v, e);
  // the second clause is a roundoff floor: once the error estimate is at the
  // level of double noise, further splitting only multiplies panels
  if (e <= tol || e <= 1e-14 * (std::abs(v) + 1e-3) || depth >= 24) return v;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 7-15 quadrature of f over [a,b] to absolute
/// tolerance tol.
template <typename F>
inline double integrate(const F& f, double a, double b, double tol = 1e-12) {
  if (!(b > a)) return 0.0;
  return detail::adapt(f, a, b, tol, 0);
}

}  // namespace cwi
