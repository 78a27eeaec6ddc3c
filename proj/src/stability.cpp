#include "fermimirror/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fermimirror/errors.hpp"

namespace fermimirror {

DriftMatrix drift_matrix(const EffectiveModel& m, const SteadyStateBranch& s) {
  if (!(s.field_amplitude >= 0.0) || !std::isfinite(s.field_amplitude))
    throw std::invalid_argument("drift_matrix: c_s must be real and >= 0");

  DriftMatrix d;
  d.c_s = s.field_amplitude;
  d.delta_tilde = s.delta_tilde;
  d.omega_m = m.omega_m;
  d.coupling_g = m.coupling_g;
  d.kappa = m.kappa;

  const double gc = m.coupling_g * s.field_amplitude;
  d.j << 0.0, m.omega_m, 0.0, 0.0,
      -m.omega_m, 0.0, -4.0 * gc, 0.0,
      0.0, 0.0, -m.kappa, s.delta_tilde,
      -2.0 * gc, 0.0, -s.delta_tilde, -m.kappa;
  return d;
}

std::array<std::complex<double>, 4> drift_eigenvalues(const DriftMatrix& d) {
  if (!d.j.allFinite())
    throw std::invalid_argument("drift_eigenvalues: non-finite entries");

  const double kappa = d.kappa > 0.0 ? d.kappa : 1.0;
  const Eigen::Matrix4d jn = d.j / kappa;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(jn, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericError("drift_eigenvalues: eigensolver failed");

  std::array<std::complex<double>, 4> lam;
  for (int i = 0; i < 4; ++i) lam[i] = solver.eigenvalues()(i);

  // Gate on the characteristic polynomial, not the solver internals.
  for (const auto& l : lam) {
    const Eigen::Matrix4cd a =
        jn.cast<std::complex<double>>() - l * Eigen::Matrix4cd::Identity();
    const double resid = std::abs(a.determinant());
    if (!(resid <= 1e-8))
      throw NumericError("drift_eigenvalues: characteristic residual " +
                         std::to_string(resid));
  }

  std::sort(lam.begin(), lam.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  for (auto& l : lam) l *= kappa;
  return lam;
}

StabilityVerdict classify(const EffectiveModel& m, const SteadyStateBranch& s) {
  StabilityVerdict v;
  v.eigenvalues = drift_eigenvalues(drift_matrix(m, s));
  v.margin = v.eigenvalues[0].real();
  const double tol = kMarginTolOverKappa * m.kappa;
  if (v.margin < -tol)
    v.cls = StabilityClass::stable;
  else if (v.margin <= tol)
    v.cls = StabilityClass::marginal;
  else
    v.cls = StabilityClass::unstable;
  return v;
}

void classify_curve(BistabilityCurve& curve) {
  for (auto& pt : curve.points) {
    for (auto& br : pt.branches) {
      const StabilityVerdict v = classify(curve.model, br.state);
      br.cls = v.cls;
      br.margin = v.margin;
    }
  }
  curve.classified = true;
}

}  // namespace fermimirror
