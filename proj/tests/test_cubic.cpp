#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fermimirror/cubic.hpp"

using namespace fermimirror;

namespace {

double eval(double a, double b, double c, double d, double x) {
  return ((a * x + b) * x + c) * x + d;
}

// Independent root finder: sign-change scan on a wide bracket plus
// bisection. Slow and dumb on purpose.
std::vector<double> scan_roots(double a, double b, double c, double d,
                               double lo, double hi) {
  std::vector<double> roots;
  const int grid = 200000;
  double xp = lo, fp = eval(a, b, c, d, lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double f = eval(a, b, c, d, x);
    if (fp == 0.0) roots.push_back(xp);
    if (fp * f < 0.0) {
      double u = xp, v = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (u + v);
        if (eval(a, b, c, d, u) * eval(a, b, c, d, mid) <= 0.0)
          v = mid;
        else
          u = mid;
      }
      roots.push_back(0.5 * (u + v));
    }
    xp = x;
    fp = f;
  }
  return roots;
}

}  // namespace

TEST_CASE("constructed roots recovered") {
  std::mt19937_64 eng(12345);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double r1 = uni(eng), r2 = uni(eng), r3 = uni(eng);
    if (std::abs(r1 - r2) < 1e-3 || std::abs(r1 - r3) < 1e-3 ||
        std::abs(r2 - r3) < 1e-3)
      continue;  // conditioning of close pairs is tested elsewhere
    const double a = 1.0 + std::abs(uni(eng)) / 10.0;
    // a (x - r1)(x - r2)(x - r3)
    const double b = -a * (r1 + r2 + r3);
    const double c = a * (r1 * r2 + r1 * r3 + r2 * r3);
    const double d = -a * r1 * r2 * r3;
    const CubicRoots got = solve_cubic(a, b, c, d);
    REQUIRE(got.count == 3);
    std::vector<double> want{r1, r2, r3};
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(got.roots[i] - want[i]) <
            1e-7 * std::max(1.0, std::abs(want[i])));
    }
  }
}

TEST_CASE("random cubics against scan oracle") {
  std::mt19937_64 eng(777);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 1.0;
    const double b = uni(eng), c = uni(eng), d = uni(eng);
    const CubicRoots got = solve_cubic(a, b, c, d);
    // Tangency-grade root pairs evade a sign-change scan; skip those draws.
    bool separated = true;
    for (int i = 0; i + 1 < got.count; ++i)
      if (got.roots[i + 1] - got.roots[i] < 1e-2) separated = false;
    if (!separated) continue;
    const auto want = scan_roots(a, b, c, d, -20.0, 20.0);
    REQUIRE(got.count == static_cast<int>(want.size()));
    for (int i = 0; i < got.count; ++i)
      CHECK(std::abs(got.roots[i] - want[static_cast<std::size_t>(i)]) <
            1e-6 * std::max(1.0, std::abs(want[static_cast<std::size_t>(i)])));
    ++compared;
  }
  CHECK(compared > 150);
}

TEST_CASE("residuals after polishing") {
  std::mt19937_64 eng(42);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = std::exp(uni(eng));
    const double b = uni(eng), c = uni(eng), d = uni(eng);
    const CubicRoots got = solve_cubic(a, b, c, d);
    for (int i = 0; i < got.count; ++i) {
      const double x = got.roots[i];
      const double scale =
          std::max({std::abs(a * x * x * x), std::abs(b * x * x),
                    std::abs(c * x), std::abs(d), 1e-30});
      CHECK(std::abs(eval(a, b, c, d, x)) / scale < 1e-12);
    }
  }
}

TEST_CASE("degenerate and degraded cases") {
  // Triple root x = 2: (x-2)^3 = x^3 - 6x^2 + 12x - 8.
  const CubicRoots triple = solve_cubic(1.0, -6.0, 12.0, -8.0);
  REQUIRE(triple.count == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(triple.roots[i] - 2.0) < 1e-5);

  // Double root at 1, simple at -2: (x-1)^2 (x+2).
  const CubicRoots dbl = solve_cubic(1.0, 0.0, -3.0, 2.0);
  REQUIRE(dbl.count == 3);
  CHECK(std::abs(dbl.roots[0] + 2.0) < 1e-8);
  CHECK(std::abs(dbl.roots[1] - 1.0) < 1e-6);
  CHECK(std::abs(dbl.roots[2] - 1.0) < 1e-6);

  // Quadratic (a = 0) and linear degradation.
  const CubicRoots quad = solve_cubic(0.0, 1.0, -3.0, 2.0);
  REQUIRE(quad.count == 2);
  CHECK(quad.roots[0] == doctest::Approx(1.0));
  CHECK(quad.roots[1] == doctest::Approx(2.0));

  const CubicRoots lin = solve_cubic(0.0, 0.0, 2.0, -5.0);
  REQUIRE(lin.count == 1);
  CHECK(lin.roots[0] == doctest::Approx(2.5));
}
