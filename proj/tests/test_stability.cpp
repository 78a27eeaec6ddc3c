#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fermimirror/constants.hpp"
#include "fermimirror/stability.hpp"
#include "fermimirror/steady.hpp"
#include "helpers.hpp"

using namespace fermimirror;
using testing_helpers::p1_model;
using testing_helpers::rel_err;
using testing_helpers::synthetic_branch;
using testing_helpers::synthetic_model;

namespace {

// Independent re-derivation of the linearization: finite-difference Jacobian
// of the quadrature-form mean-field flow at the rotated fixed point. The
// rotated frame needs a complex drive eta = c_s (kappa + i dtilde) so that
// (X_M_s, 0, sqrt(2) c_s, 0) is an exact fixed point.
std::array<double, 4> rotated_rhs(const EffectiveModel& m,
                                  std::complex<double> eta, double delta,
                                  const std::array<double, 4>& f) {
  const double xm = f[0], pm = f[1], x = f[2], p = f[3];
  const double phase = delta + std::sqrt(2.0) * m.coupling_g * xm;
  return {m.omega_m * pm,
          -m.omega_m * xm -
              std::sqrt(2.0) * m.coupling_g * (x * x + p * p),
          phase * p - m.kappa * x + std::sqrt(2.0) * eta.real(),
          -phase * x - m.kappa * p + std::sqrt(2.0) * eta.imag()};
}

Eigen::Matrix4d fd_jacobian(const EffectiveModel& m, const SteadyStateBranch& s) {
  const std::complex<double> eta =
      s.field_amplitude * std::complex<double>(m.kappa, s.delta_tilde);
  const double delta = s.delta_tilde -
                       std::sqrt(2.0) * m.coupling_g * s.mirror_position;
  std::array<double, 4> f0{s.mirror_position, 0.0,
                           std::sqrt(2.0) * s.field_amplitude, 0.0};
  // Sanity: f0 must be a fixed point of the rotated flow.
  const auto r0 = rotated_rhs(m, eta, delta, f0);
  const double scale = std::max({m.omega_m, m.kappa, std::abs(s.delta_tilde)});
  for (double v : r0) REQUIRE(std::abs(v) < 1e-6 * scale);

  Eigen::Matrix4d j;
  for (int col = 0; col < 4; ++col) {
    const double h = 1e-6 * std::max(1.0, std::abs(f0[col]));
    auto fp = f0, fm_ = f0;
    fp[col] += h;
    fm_[col] -= h;
    const auto rp = rotated_rhs(m, eta, delta, fp);
    const auto rm = rotated_rhs(m, eta, delta, fm_);
    for (int row = 0; row < 4; ++row)
      j(row, col) = (rp[row] - rm[row]) / (2.0 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("drift matrix entries and trace") {
  const EffectiveModel m = p1_model();
  const auto branches = steady_states(m, 4.8 * m.kappa, m.detuning);
  REQUIRE(branches.size() == 3);
  for (const auto& s : branches) {
    const DriftMatrix d = drift_matrix(m, s);
    const double gc = m.coupling_g * s.field_amplitude;
    CHECK(d.j(0, 1) == m.omega_m);
    CHECK(d.j(1, 0) == -m.omega_m);
    CHECK(d.j(1, 2) == -4.0 * gc);
    CHECK(d.j(3, 0) == -2.0 * gc);
    CHECK(d.j(2, 3) == s.delta_tilde);
    CHECK(d.j(3, 2) == -s.delta_tilde);
    CHECK(rel_err(d.j.trace(), -2.0 * m.kappa) < 1e-14);
  }
}

TEST_CASE("drift matrix against finite-difference linearization") {
  const EffectiveModel m = p1_model();
  const auto branches = steady_states(m, 4.8 * m.kappa, m.detuning);
  REQUIRE(branches.size() == 3);
  for (const auto& s : branches) {
    const Eigen::Matrix4d want = fd_jacobian(m, s);
    const Eigen::Matrix4d got = drift_matrix(m, s).j;
    const double scale = got.cwiseAbs().maxCoeff();
    CHECK((want - got).cwiseAbs().maxCoeff() < 1e-5 * scale);
  }
}

TEST_CASE("decoupled blocks at g = 0") {
  EffectiveModel m = synthetic_model(0.7, 1.0, 0.0);
  SteadyStateBranch s = synthetic_branch(m, 2.0, 1.3);
  const auto lam = drift_eigenvalues(drift_matrix(m, s));
  // {+- i omega_m, -kappa +- i dtilde}, sorted by real part descending.
  CHECK(std::abs(lam[0] - std::complex<double>(0.0, 0.7)) < 1e-12);
  CHECK(std::abs(lam[1] - std::complex<double>(0.0, -0.7)) < 1e-12);
  CHECK(std::abs(lam[2] - std::complex<double>(-1.0, 1.3)) < 1e-12);
  CHECK(std::abs(lam[3] - std::complex<double>(-1.0, -1.3)) < 1e-12);
}

TEST_CASE("unit case") {
  EffectiveModel m = synthetic_model(1.0, 1.0, 0.0);
  SteadyStateBranch s = synthetic_branch(m, 0.0, 0.0);
  const auto lam = drift_eigenvalues(drift_matrix(m, s));
  CHECK(std::abs(lam[0] - std::complex<double>(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(lam[1] - std::complex<double>(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(lam[2] - std::complex<double>(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(lam[3] - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("eigenvalue sum equals trace on random matrices") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    EffectiveModel m = synthetic_model(std::exp(uni(eng) * 3.0 - 1.5), 1.0,
                                       uni(eng));
    SteadyStateBranch s =
        synthetic_branch(m, 4.0 * uni(eng), 4.0 * uni(eng) - 2.0);
    const auto lam = drift_eigenvalues(drift_matrix(m, s));
    std::complex<double> sum = 0.0;
    for (const auto& l : lam) sum += l;
    CHECK(std::abs(sum - std::complex<double>(-2.0 * m.kappa, 0.0)) <=
          1e-10 * 2.0 * m.kappa);
    // Conjugate pairing of complex eigenvalues.
    double imag_sum = 0.0;
    for (const auto& l : lam) imag_sum += l.imag();
    CHECK(std::abs(imag_sum) < 1e-10 * (1.0 + std::abs(lam[0])));
  }
}

TEST_CASE("non-finite rejection") {
  EffectiveModel m = synthetic_model(1.0, 1.0, 0.1);
  SteadyStateBranch s = synthetic_branch(m, 1.0, 0.5);
  DriftMatrix d = drift_matrix(m, s);
  d.j(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(drift_eigenvalues(d));
  s.field_amplitude = -1.0;
  CHECK_THROWS(drift_matrix(m, s));
}

TEST_CASE("middle branch unstable; dark state marginal") {
  const EffectiveModel m = p1_model();
  const auto branches = steady_states(m, 4.8 * m.kappa, m.detuning);
  REQUIRE(branches.size() == 3);
  CHECK(classify(m, branches[1]).cls == StabilityClass::unstable);
  CHECK(classify(m, branches[1]).margin > 0.0);

  // Undriven point: undamped mechanical pair exactly on the axis.
  const auto dark = steady_states(m, 0.0, m.detuning);
  const StabilityVerdict v = classify(m, dark[0]);
  CHECK(v.cls == StabilityClass::marginal);
  CHECK(std::abs(v.margin) <= kMarginTolOverKappa * m.kappa);
}

TEST_CASE("middle branch unstable across random bistable models") {
  std::mt19937_64 eng(31);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    EffectiveModel m = p1_model();
    // Random rescalings keep the model physical while moving the window.
    m.coupling_g *= 0.5 + uni(eng);
    m.omega_m *= 0.5 + uni(eng);
    const double delta = (std::sqrt(3.0) + 0.2 + 2.0 * uni(eng)) * m.kappa;
    const BistabilityThreshold t = bistability_threshold(m);
    if (!t.bistable_possible) continue;
    // Pick a drive inside the fold window at this detuning.
    const double disc = delta * delta - 3.0 * m.kappa * m.kappa;
    const double up = (delta + std::sqrt(disc)) / 3.0;
    const double um = (delta - std::sqrt(disc)) / 3.0;
    const double e_lo =
        std::sqrt((delta - um) / m.chi() * (m.kappa * m.kappa + um * um));
    const double e_hi =
        std::sqrt((delta - up) / m.chi() * (m.kappa * m.kappa + up * up));
    const double eta = std::sqrt(e_lo * e_hi);
    const auto branches = steady_states(m, eta, delta);
    if (branches.size() != 3) continue;
    CHECK(classify(m, branches[1]).cls == StabilityClass::unstable);
    ++checked;
  }
}

TEST_CASE("marginal mechanical pair iff g c_s = 0") {
  std::mt19937_64 eng(55);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    EffectiveModel m = synthetic_model(0.2 + 2.0 * uni(eng), 1.0,
                                       0.05 + 0.3 * uni(eng));
    SteadyStateBranch s =
        synthetic_branch(m, 0.5 + 3.0 * uni(eng), 0.3 + 3.0 * uni(eng));
    const StabilityVerdict v = classify(m, s);
    // Coupled and detuned: the mechanical pair is pushed off the axis, so
    // the verdict is strictly stable or strictly unstable, never marginal.
    CHECK(v.cls != StabilityClass::marginal);
    CHECK(std::abs(v.margin) > kMarginTolOverKappa * m.kappa);

    SteadyStateBranch dark = synthetic_branch(m, 0.0, s.delta_tilde);
    CHECK(classify(m, dark).cls == StabilityClass::marginal);
  }
}

TEST_CASE("fold point: real part crosses zero with vanishing imaginary part") {
  const EffectiveModel m = p1_model();
  const double eta_fold = 4.583033140900823 * m.kappa;
  const auto branches = steady_states(m, eta_fold, m.detuning);
  // The merging pair sits at the fold; its leading eigenvalue is (nearly)
  // zero and real.
  double best_abs = 1e300;
  std::complex<double> best;
  for (const auto& s : branches) {
    for (const auto& lam : drift_eigenvalues(drift_matrix(m, s))) {
      if (std::abs(lam) < best_abs) {
        best_abs = std::abs(lam);
        best = lam;
      }
    }
  }
  CHECK(best_abs < 1e-3 * m.kappa);
  CHECK(std::abs(best.imag()) <= 1e-6 * m.kappa);
}

TEST_CASE("classify_curve fills verdicts") {
  const EffectiveModel m = p1_model();
  BistabilityCurve c =
      sweep(m, SweepVariable::drive, 4.6 * m.kappa, 5.3 * m.kappa, 15,
            m.detuning);
  classify_curve(c);
  CHECK(c.classified);
  for (const auto& pt : c.points)
    for (const auto& br : pt.branches)
      CHECK(br.cls != StabilityClass::unset);
}
