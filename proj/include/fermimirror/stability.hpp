#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "fermimirror/model.hpp"
#include "fermimirror/steady.hpp"

namespace fermimirror {

/// Jacobian of the linearized Langevin equations over [dX_M, dP_M, dX, dP]:
///   [    0    omega_M     0        0   ]
///   [-omega_M    0    -4 g c_s     0   ]
///   [    0       0       -kappa  dtilde]
///   [-2 g c_s    0      -dtilde  -kappa]
/// The -4 g c_s vs -2 g c_s asymmetry is genuine (position couples to photon
/// number, the field quadrature to the displaced detuning).
struct DriftMatrix {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  double c_s = 0.0;
  double delta_tilde = 0.0;
  double omega_m = 0.0;
  double coupling_g = 0.0;
  double kappa = 0.0;
};

struct StabilityVerdict {
  std::array<std::complex<double>, 4> eigenvalues{};  // sorted Re descending
  StabilityClass cls = StabilityClass::unset;
  double margin = 0.0;  // max Re(eigenvalue) [rad/s]
};

DriftMatrix drift_matrix(const EffectiveModel& m, const SteadyStateBranch& s);

/// Eigenvalues of the kappa-normalized drift matrix, scaled back to rad/s and
/// sorted by real part descending. The characteristic-polynomial residual
/// |det(J/kappa - lambda I)| is checked against 1e-8; a violation raises
/// NumericError. Non-finite entries are rejected.
std::array<std::complex<double>, 4> drift_eigenvalues(const DriftMatrix& d);

/// Stable iff max Re < -tol, marginal iff |max Re| <= tol, with
/// tol = 1e-9 kappa so the undamped mechanical pair at n = 0 classifies as
/// marginal rather than unstable.
StabilityVerdict classify(const EffectiveModel& m, const SteadyStateBranch& s);

/// Attach verdicts to every branch of a sweep.
void classify_curve(BistabilityCurve& curve);

inline constexpr double kMarginTolOverKappa = 1e-9;

}  // namespace fermimirror
