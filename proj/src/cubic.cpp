#include "fermimirror/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fermimirror/constants.hpp"

namespace fermimirror {

double polish_cubic_root(double a, double b, double c, double d, double x) {
  for (int it = 0; it < 12; ++it) {
    const double f = ((a * x + b) * x + c) * x + d;
    const double fp = (3.0 * a * x + 2.0 * b) * x + c;
    if (fp == 0.0) break;
    const double dx = f / fp;
    const double xn = x - dx;
    if (!std::isfinite(xn)) break;
    const double fn = ((a * xn + b) * xn + c) * xn + d;
    if (std::abs(fn) >= std::abs(f)) break;  // no further progress
    x = xn;
    if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() *
                            std::abs(x))
      break;
  }
  return x;
}

static CubicRoots solve_quadratic(double b, double c, double d) {
  CubicRoots r;
  if (b == 0.0) {
    if (c == 0.0) return r;  // constant: no roots (d != 0) or everything (d=0)
    r.count = 1;
    r.roots[0] = -d / c;
    return r;
  }
  const double disc = c * c - 4.0 * b * d;
  if (disc < 0.0) return r;
  const double sq = std::sqrt(disc);
  // Stable form: avoid cancellation in the smaller root.
  const double q = -0.5 * (c + std::copysign(sq, c));
  double x0 = q / b;
  double x1 = (q != 0.0) ? d / q : -c / b - x0;
  if (disc == 0.0) {
    r.count = 1;
    r.roots[0] = x0;
    return r;
  }
  if (x0 > x1) std::swap(x0, x1);
  r.count = 2;
  r.roots[0] = x0;
  r.roots[1] = x1;
  return r;
}

CubicRoots solve_cubic(double a, double b, double c, double d) {
  if (a == 0.0) return solve_quadratic(b, c, d);

  const double A = b / a;
  const double B = c / a;
  const double C = d / a;

  // x = t - A/3 gives t^3 + p t + q.
  const double A2 = A * A;
  const double p = B - A2 / 3.0;
  const double q = (2.0 * A2 * A / 27.0) - (A * B / 3.0) + C;
  const double shift = A / 3.0;

  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  CubicRoots r;
  if (disc > 0.0) {
    // One real root; Cardano in the cancellation-free arrangement.
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-half_q + (half_q <= 0.0 ? sq : -sq));
    // When half_q > 0 we computed cbrt(-half_q - sq); both branches keep the
    // large magnitude term additive.
    const double t = (u == 0.0) ? 0.0 : u - third_p / u;
    r.count = 1;
    r.roots[0] = t - shift;
  } else if (p == 0.0) {
    // Triple root.
    r.count = 3;
    r.roots[0] = r.roots[1] = r.roots[2] = std::cbrt(-q) - shift;
  } else {
    // Three real roots (disc <= 0 requires p < 0 here).
    const double m = 2.0 * std::sqrt(-third_p);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    r.count = 3;
    r.roots[0] = m * std::cos(phi) - shift;
    r.roots[1] = m * std::cos(phi - 2.0 * kPi / 3.0) - shift;
    r.roots[2] = m * std::cos(phi - 4.0 * kPi / 3.0) - shift;
  }

  for (int i = 0; i < r.count; ++i)
    r.roots[i] = polish_cubic_root(a, b, c, d, r.roots[i]);
  std::sort(r.roots.begin(), r.roots.begin() + r.count);
  return r;
}

}  // namespace fermimirror
