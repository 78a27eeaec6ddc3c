#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fermimirror/model.hpp"

namespace fermimirror {

/// One real root of the steady-state cubic with its linearization data.
struct SteadyStateBranch {
  double photon_number = 0.0;    // n = |c_s|^2
  double field_amplitude = 0.0;  // c_s = sqrt(n), global phase rotated away
  double mirror_position = 0.0;  // X_M = -2 sqrt(2) g n / omega_M
  double mirror_momentum = 0.0;  // always 0 in steady state
  double delta_tilde = 0.0;      // Delta - 4 g^2 n / omega_M [rad/s]
  double residual = 0.0;         // normalized cubic residual
  bool fold = false;             // merged with a nearly-degenerate root
};

enum class StabilityClass { stable, unstable, marginal, unset };

char stability_code(StabilityClass c);  // 'S', 'U', 'M', '?'

struct CurveBranch {
  SteadyStateBranch state;
  StabilityClass cls = StabilityClass::unset;
  double margin = 0.0;  // max Re(eigenvalue) [rad/s]
};

enum class SweepVariable { detuning, drive };

struct CurvePoint {
  double sweep_value = 0.0;  // Delta [rad/s] or eta [rad/s]
  std::vector<CurveBranch> branches;  // sorted by photon number
};

struct BistabilityCurve {
  SweepVariable variable = SweepVariable::drive;
  double fixed_value = 0.0;  // the non-swept control [rad/s]
  EffectiveModel model;
  std::vector<CurvePoint> points;
  bool classified = false;
};

/// All real nonnegative roots of
///   chi^2 n^3 - 2 chi Delta n^2 + (kappa^2 + Delta^2) n - eta^2 = 0,
/// solved in kappa-normalized units, polished to relative residual <= 1e-10,
/// near-degenerate pairs merged and fold-flagged. Sorted by n ascending.
std::vector<SteadyStateBranch> steady_states(const EffectiveModel& m,
                                             double eta, double delta);

/// Sweep one control with the other fixed. For `drive`, `from`/`to` are eta
/// in rad/s and `fixed` is Delta; for `detuning` the converse.
BistabilityCurve sweep(const EffectiveModel& m, SweepVariable variable,
                       double from, double to, int steps, double fixed);

struct BistabilityThreshold {
  bool bistable_possible = false;
  double eta_c = 0.0;      // cusp drive [rad/s]
  double delta_c = 0.0;    // cusp detuning [rad/s]
  double n_c = 0.0;        // cusp photon number
  double eta_c_scan = 0.0;   // independent discriminant-scan verification
  double delta_c_scan = 0.0;
};

/// Cusp where the cubic first admits a double root as Delta varies:
/// Delta_c = sqrt(3) kappa sign(chi), n_c = 2 kappa/(sqrt(3)|chi|),
/// eta_c^2 = 8 kappa^3/(3 sqrt(3) |chi|). The closed form is cross-checked
/// against a discriminant sign-change scan; disagreement beyond 1e-3
/// relative raises NumericError.
BistabilityThreshold bistability_threshold(const EffectiveModel& m);

/// Discriminant-scan half of the threshold: bisection on the smallest
/// detuning for which the cubic has three distinct real roots at some drive.
/// Independent of the closed form above (and of solve_cubic).
void threshold_scan(const EffectiveModel& m, double& eta_c, double& delta_c);

enum class SweepDirection { up, down };

struct TracePoint {
  double sweep_value = 0.0;
  bool gap = false;      // no stable branch at this sample
  double n = 0.0;        // followed photon number (meaningless if gap)
  int branch_pos = -1;   // index into the point's branch list
  bool jump = false;     // switched branch relative to previous sample
};

struct HysteresisTrace {
  SweepDirection direction = SweepDirection::up;
  std::vector<TracePoint> points;
  std::vector<double> jump_values;  // sweep values where a jump or gap begins
};

/// Follow the current stable branch until it disappears, then jump to the
/// nearest remaining stable branch; gaps (no stable branch) are marked
/// explicitly. Requires a classified curve.
HysteresisTrace hysteresis_trace(const BistabilityCurve& curve,
                                 SweepDirection direction);

}  // namespace fermimirror
