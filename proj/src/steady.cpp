#include "fermimirror/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fermimirror/cubic.hpp"
#include "fermimirror/errors.hpp"

namespace fermimirror {

namespace {

constexpr double kFoldMergeTol = 1e-6;  // relative root separation

// Backward-error style residual: |f(n)| over the largest term magnitude
// (floored by eta^2 so the physical scale dominates when it exists).
double cubic_residual(double chi_bar, double delta_bar, double eta_bar,
                      double n) {
  const double t3 = chi_bar * chi_bar * n * n * n;
  const double t2 = -2.0 * chi_bar * delta_bar * n * n;
  const double t1 = (1.0 + delta_bar * delta_bar) * n;
  const double t0 = -eta_bar * eta_bar;
  const double f = t3 + t2 + t1 + t0;
  const double scale = std::max(
      {std::abs(t3), std::abs(t2), std::abs(t1), std::abs(t0), 1e-300});
  return std::abs(f) / scale;
}

SteadyStateBranch make_branch(const EffectiveModel& m, double delta, double n,
                              double residual, bool fold) {
  SteadyStateBranch b;
  b.photon_number = n;
  b.field_amplitude = std::sqrt(n);
  b.mirror_position = -2.0 * std::sqrt(2.0) * m.coupling_g * n / m.omega_m;
  b.mirror_momentum = 0.0;
  b.delta_tilde = delta - m.chi() * n;
  b.residual = residual;
  b.fold = fold;
  return b;
}

}  // namespace

char stability_code(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable: return 'S';
    case StabilityClass::unstable: return 'U';
    case StabilityClass::marginal: return 'M';
    case StabilityClass::unset: return '?';
  }
  return '?';
}

std::vector<SteadyStateBranch> steady_states(const EffectiveModel& m,
                                             double eta, double delta) {
  if (!(eta >= 0.0) || !std::isfinite(eta) || !std::isfinite(delta))
    throw std::invalid_argument("steady_states: eta must be finite and >= 0");

  const double kappa = m.kappa;
  const double chi_bar = m.chi() / kappa;
  const double delta_bar = delta / kappa;
  const double eta_bar = eta / kappa;

  std::vector<double> roots;
  if (chi_bar == 0.0) {
    roots.push_back(eta_bar * eta_bar / (1.0 + delta_bar * delta_bar));
  } else {
    const CubicRoots r =
        solve_cubic(chi_bar * chi_bar, -2.0 * chi_bar * delta_bar,
                    1.0 + delta_bar * delta_bar, -eta_bar * eta_bar);
    for (int i = 0; i < r.count; ++i) roots.push_back(r.roots[i]);
  }

  // Keep nonnegative roots; clamp roundoff negatives at the origin.
  std::vector<double> keep;
  for (double n : roots) {
    if (n >= 0.0)
      keep.push_back(n);
    else if (n > -1e-12 * std::max(1.0, eta_bar * eta_bar))
      keep.push_back(0.0);
  }
  std::sort(keep.begin(), keep.end());

  std::vector<SteadyStateBranch> out;
  for (std::size_t i = 0; i < keep.size();) {
    std::size_t j = i + 1;
    double sum = keep[i];
    while (j < keep.size() &&
           keep[j] - keep[i] <=
               kFoldMergeTol * std::max({keep[j], keep[i], 1e-30})) {
      sum += keep[j];
      ++j;
    }
    const bool fold = (j - i) > 1;
    // n is dimensionless and identical in kappa-normalized and SI units.
    const double n = sum / static_cast<double>(j - i);
    const double res = cubic_residual(chi_bar, delta_bar, eta_bar, n);
    out.push_back(make_branch(m, delta, n, res, fold));
    i = j;
  }
  return out;
}

BistabilityCurve sweep(const EffectiveModel& m, SweepVariable variable,
                       double from, double to, int steps, double fixed) {
  if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
  if (!(from < to) && !(to < from))
    throw std::invalid_argument("sweep: empty range");

  BistabilityCurve curve;
  curve.variable = variable;
  curve.fixed_value = fixed;
  curve.model = m;
  curve.points.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double x =
        from + (to - from) * static_cast<double>(i) / (steps - 1);
    CurvePoint pt;
    pt.sweep_value = x;
    const double eta = variable == SweepVariable::drive ? x : fixed;
    const double delta = variable == SweepVariable::drive ? fixed : x;
    for (auto& s : steady_states(m, eta, delta))
      pt.branches.push_back({s, StabilityClass::unset, 0.0});
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

namespace {

// Discriminant of the steady-state cubic as a function of s = eta_bar^2 at
// fixed detuning; concave parabola, so the bistable window exists iff its
// vertex is positive at an admissible drive.
struct DiscParabola {
  double alpha, beta, gamma;  // disc(s) = alpha s^2 + beta s + gamma
  double vertex_s() const { return -beta / (2.0 * alpha); }
  double vertex_value() const { return gamma - beta * beta / (4.0 * alpha); }
};

DiscParabola disc_in_drive(double chi_bar, double delta_bar) {
  const double a = chi_bar * chi_bar;
  const double b = -2.0 * chi_bar * delta_bar;
  const double c = 1.0 + delta_bar * delta_bar;
  DiscParabola p;
  p.alpha = -27.0 * a * a;
  p.beta = 4.0 * b * b * b - 18.0 * a * b * c;
  p.gamma = b * b * c * c - 4.0 * a * c * c * c;
  return p;
}

bool window_exists(double chi_bar, double delta_bar) {
  const DiscParabola p = disc_in_drive(chi_bar, delta_bar);
  return p.vertex_s() > 0.0 && p.vertex_value() > 0.0;
}

}  // namespace

void threshold_scan(const EffectiveModel& m, double& eta_c, double& delta_c) {
  const double kappa = m.kappa;
  const double chi_bar = std::abs(m.chi()) / kappa;
  if (chi_bar == 0.0) throw NumericError("threshold_scan: chi is zero");

  // Bracket the onset detuning; bistability of this cubic needs |Delta| of
  // the same sign as chi, somewhere above kappa.
  double lo = 1.0, hi = 2.0;
  while (!window_exists(chi_bar, hi) && hi < 1e6) hi *= 2.0;
  if (!window_exists(chi_bar, hi))
    throw NumericError("threshold_scan: no bistable window found");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (window_exists(chi_bar, mid) ? hi : lo) = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  const double delta_bar_c = hi;
  const double s_c = disc_in_drive(chi_bar, delta_bar_c).vertex_s();
  const double sign = m.chi() >= 0.0 ? 1.0 : -1.0;
  eta_c = std::sqrt(s_c) * kappa;
  delta_c = sign * delta_bar_c * kappa;
}

BistabilityThreshold bistability_threshold(const EffectiveModel& m) {
  BistabilityThreshold t;
  const double chi = m.chi();
  if (chi == 0.0) {
    t.bistable_possible = false;
    return t;
  }
  const double kappa = m.kappa;
  t.bistable_possible = true;
  t.delta_c = std::sqrt(3.0) * kappa * (chi >= 0.0 ? 1.0 : -1.0);
  t.n_c = 2.0 * kappa / (std::sqrt(3.0) * std::abs(chi));
  t.eta_c = std::sqrt(8.0 * kappa * kappa * kappa /
                      (3.0 * std::sqrt(3.0) * std::abs(chi)));
  threshold_scan(m, t.eta_c_scan, t.delta_c_scan);
  if (std::abs(t.eta_c_scan - t.eta_c) > 1e-3 * t.eta_c)
    throw NumericError(
        "bistability_threshold: scan disagrees with the cusp formula");
  return t;
}

HysteresisTrace hysteresis_trace(const BistabilityCurve& curve,
                                 SweepDirection direction) {
  if (!curve.classified)
    throw std::invalid_argument(
        "hysteresis_trace: curve must carry stability classes");

  HysteresisTrace tr;
  tr.direction = direction;
  const std::size_t npts = curve.points.size();
  tr.points.reserve(npts);

  // A branch switch counts as a jump when the followed photon number moves
  // by more than this fraction in one grid step.
  constexpr double kJumpRel = 0.2;

  bool have_prev = false;
  double prev_n = 0.0;

  for (std::size_t step = 0; step < npts; ++step) {
    const std::size_t idx =
        direction == SweepDirection::up ? step : npts - 1 - step;
    const CurvePoint& pt = curve.points[idx];

    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t bi = 0; bi < pt.branches.size(); ++bi) {
      const CurveBranch& br = pt.branches[bi];
      if (br.cls == StabilityClass::unstable) continue;
      const double n = br.state.photon_number;
      const double dist = have_prev ? std::abs(n - prev_n) : n;
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(bi);
      }
    }

    TracePoint tp;
    tp.sweep_value = pt.sweep_value;
    if (best < 0) {
      tp.gap = true;
      if (have_prev) tr.jump_values.push_back(pt.sweep_value);
      have_prev = false;
    } else {
      const double n = pt.branches[best].state.photon_number;
      tp.n = n;
      tp.branch_pos = best;
      if (have_prev) {
        const double ref = std::max({prev_n, n, 1e-30});
        tp.jump = std::abs(n - prev_n) > kJumpRel * ref;
      } else if (!tr.points.empty()) {
        tp.jump = true;  // re-entry after a gap
      }
      if (tp.jump) tr.jump_values.push_back(pt.sweep_value);
      prev_n = n;
      have_prev = true;
    }
    tr.points.push_back(tp);
  }
  return tr;
}

}  // namespace fermimirror
