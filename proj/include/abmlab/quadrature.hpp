#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature with recursive bisection.

#include <cmath>
#include <functional>

#include "abmlab/errors.hpp"

namespace abmlab {

namespace detail {

// K15 abscissae/weights and the embedded G7 weights (QUADPACK dqk15).
inline constexpr double kGk15X[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGk15W[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7W[4] = {0.129484966168870, 0.279705391489277,
                                   0.381830050505119, 0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGk15X[i]);
    fv[14 - i] = f(c + h * kGk15X[i]);
  }
  fv[7] = f(c);
  double resk = 0.0;
  for (int i = 0; i < 7; ++i) resk += kGk15W[i] * (fv[i] + fv[14 - i]);
  resk += kGk15W[7] * fv[7];
  double resg = kG7W[3] * fv[7];
  for (int i = 0; i < 3; ++i) resg += kG7W[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  kronrod = resk * h;
  err = std::fabs((resk - resg) * h);
}

template <typename F>
double adaptive_gk_rec(const F& f, double a, double b, double tol, int depth) {
  double val, err;
  gk15(f, a, b, val, err);
  if (err <= tol || b - a < 1e-14 * (1.0 + std::fabs(a))) {
    if (depth <= 0 && err > tol) {
      throw QuadratureNotConverged("adaptive quadrature did not reach tolerance");
    }
    return val;
  }
  if (depth <= 0) throw QuadratureNotConverged("adaptive quadrature depth exhausted");
  double m = 0.5 * (a + b);
  return adaptive_gk_rec(f, a, m, 0.5 * tol, depth - 1) +
         adaptive_gk_rec(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integrates f over [a,b] to the given absolute tolerance.
template <typename F>
double adaptive_quadrature(const F& f, double a, double b, double abs_tol, int max_depth = 40) {
  if (!(b > a)) return 0.0;
  return detail::adaptive_gk_rec(f, a, b, abs_tol, max_depth);
}

}  // namespace abmlab
