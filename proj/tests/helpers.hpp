#pragma once

#include <cmath>
#include <random>

#include "fermimirror/constants.hpp"
#include "fermimirror/model.hpp"
#include "fermimirror/steady.hpp"

namespace testing_helpers {

using fermimirror::EffectiveModel;
using fermimirror::PhysicalParams;
using fermimirror::kTwoPi;

// The workhorse parameter set: K = 1e7 rad/m with k_F pinned at 12.5 K,
// L = 100 um, N = 5000, M = 1.5e-25 kg, U0 = 2pi x 20 kHz,
// kappa = 2pi x 1 MHz. Default detuning corresponds to
// omega_L - omega_c = 2pi x 47.5 MHz, i.e. Delta = 2pi x 2.5 MHz.
inline PhysicalParams p1_params(double pump_cavity_detuning_hz = 47.5e6) {
  PhysicalParams p;
  p.wavenumber = 1.0e7;
  p.cavity_length = 100e-6;
  p.atom_number = 5000;
  p.atomic_mass = 1.5e-25;
  p.dispersive_coupling = kTwoPi * 20e3;
  p.kappa = kTwoPi * 1e6;
  p.eta = 0.0;
  p.pump_cavity_detuning = kTwoPi * pump_cavity_detuning_hz;
  p.kf_over_k = 12.5;
  return p;
}

inline EffectiveModel p1_model(double pump_cavity_detuning_hz = 47.5e6) {
  return fermimirror::build_effective_model(
      p1_params(pump_cavity_detuning_hz));
}

// Synthetic model with the linearization scales set directly (kappa = 1).
// Useful for randomized spectra/stability property tests.
inline EffectiveModel synthetic_model(double omega_m, double kappa, double g) {
  EffectiveModel m;
  m.wavenumber = 1.0;
  m.fermi_momentum = 10.0;
  m.fermi_velocity = omega_m / 2.0;
  m.fermi_frequency = 50.0 * omega_m / 4.0;
  m.beta = 0.1;
  m.omega_m = omega_m;
  m.coupling_g = g;
  m.detuning = 0.0;
  m.kappa = kappa;
  m.eta = 0.0;
  m.u0 = 4.0 * g * 0.1;
  return m;
}

// A steady-state-like record at a chosen operating point without solving the
// cubic; photon number and delta_tilde are free.
inline fermimirror::SteadyStateBranch synthetic_branch(
    const EffectiveModel& m, double n, double delta_tilde) {
  fermimirror::SteadyStateBranch b;
  b.photon_number = n;
  b.field_amplitude = std::sqrt(n);
  b.mirror_position = -2.0 * std::sqrt(2.0) * m.coupling_g * n / m.omega_m;
  b.mirror_momentum = 0.0;
  b.delta_tilde = delta_tilde;
  b.residual = 0.0;
  return b;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) /
         std::max({std::abs(got), std::abs(want), 1e-300});
}

}  // namespace testing_helpers
