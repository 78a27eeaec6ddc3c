#pragma once

#include <array>

namespace fermimirror {

struct CubicRoots {
  int count = 0;                  // number of real roots stored (1..3)
  std::array<double, 3> roots{};  // ascending
};

/// All real roots of a x^3 + b x^2 + c x + d = 0, via the depressed-cubic
/// trigonometric form for three real roots and a stable Cardano branch for
/// one. Degenerates gracefully to quadratic/linear when leading coefficients
/// vanish. Roots are Newton-polished against the original coefficients.
CubicRoots solve_cubic(double a, double b, double c, double d);

/// Guarded Newton refinement of x on a x^3 + b x^2 + c x + d.
double polish_cubic_root(double a, double b, double c, double d, double x);

}  // namespace fermimirror
