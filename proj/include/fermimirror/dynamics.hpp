#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fermimirror/model.hpp"
#include "fermimirror/spectra.hpp"
#include "fermimirror/steady.hpp"

namespace fermimirror {

struct SimConfig {
  double dt = 0.0;         // [s]; dt * max(omega_M, kappa, |dtilde|) <= 0.1
  long long steps = 0;
  int ensemble = 1;
  std::uint64_t seed = 1;
  double burn_in = 0.0;    // fraction of steps dropped, in [0, 1)
  std::string noise_convention = "symmetric-classical";
  std::array<double, 4> initial{};  // [X_M, P_M, X, P] or [X_M, P_M, Re c, Im c]
};

struct Trajectory {
  double dt = 0.0;
  double t0 = 0.0;  // time of first retained sample
  std::vector<std::array<double, 4>> states;
  std::uint64_t seed = 0;
};

/// Noise-free mean-field dynamics of (X_M, P_M, c) under drive and decay,
/// integrated with fixed-step classical RK4. State layout
/// [X_M, P_M, Re c, Im c]. Divergence (|state| > 1e12) aborts with a
/// diagnostic. The steady-state amplitude in this frame is the complex
/// c = eta / (kappa + i dtilde).
Trajectory simulate_meanfield(const EffectiveModel& m, double eta,
                              double delta, const std::array<double, 4>& init,
                              const SimConfig& cfg);

/// Mean-field right-hand side (exposed for oracles and step-size studies).
std::array<double, 4> meanfield_rhs(const EffectiveModel& m, double eta,
                                    double delta,
                                    const std::array<double, 4>& f);

/// Euler-Maruyama integration of d f = J f dt + dW around a stable branch.
/// The optical-block increments are Gaussian with per-step covariance
/// dt * 2 kappa * Re(nmat); quantum (imaginary) cross-correlations cannot be
/// realized by a real-valued classical SDE and are symmetrized away.
/// Reproducible from cfg.seed.
Trajectory simulate_linear(const EffectiveModel& m, const SteadyStateBranch& s,
                           const SimConfig& cfg);

struct Psd {
  std::vector<double> omega;    // rad/s, ascending, two-sided
  std::vector<double> density;  // per rad/s
  double bin_width = 0.0;
  int segments_averaged = 0;
};

/// Welch-averaged two-sided spectral density with a periodic Hann window and
/// 50% overlap, normalized so a white input of density sigma^2 (per-sample
/// variance sigma^2/dt) returns a flat level sigma^2. Segment length is the
/// largest power of two <= N/segments; fewer than 4 effective segments is an
/// error ("trajectory too short").
Psd periodogram(std::span<const double> samples, double dt, int segments);
Psd periodogram(const Trajectory& t, int channel, int segments);

/// Ensemble-averaged Welch spectrum of the linearized dynamics: `ensemble`
/// members with splittable sub-seeds, run in parallel, averaged in fixed
/// member order. Channel indexes [X_M, P_M, X, P].
Psd ensemble_linear_psd(const EffectiveModel& m, const SteadyStateBranch& s,
                        const SimConfig& cfg, int channel, int segments);

}  // namespace fermimirror
