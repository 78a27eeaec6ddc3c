#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fermimirror {

/// Experimental inputs for a driven cavity filled with a degenerate gas of
/// spinless fermions. All frequencies are angular (rad/s); the config layer
/// accepts plain Hz and converts exactly once at the boundary.
///
/// Exactly one of {wavenumber, wavelength} must be set, and exactly one of
/// {dispersive_coupling} or {rabi_g0, pump_atom_detuning}.
struct PhysicalParams {
  std::optional<double> wavenumber;           // K [rad/m]
  std::optional<double> wavelength;           // lambda [m]
  double cavity_length = 0.0;                 // L [m]
  long long atom_number = 0;                  // N
  double atomic_mass = 0.0;                   // M [kg]
  std::optional<double> dispersive_coupling;  // U0 [rad/s], nonzero
  std::optional<double> rabi_g0;              // g0 [rad/s]
  std::optional<double> pump_atom_detuning;   // omega_L - omega_a [rad/s]
  double kappa = 0.0;                         // cavity decay [rad/s]
  double eta = 0.0;                           // drive rate [rad/s]
  double pump_cavity_detuning = 0.0;          // omega_L - omega_c [rad/s]
  std::optional<double> kf_over_k;            // optional k_F/K override
};

/// Derived optomechanical parameters of the collective density mode.
struct EffectiveModel {
  double wavenumber = 0.0;       // K [rad/m]
  double fermi_momentum = 0.0;   // k_F [rad/m]
  double fermi_velocity = 0.0;   // v_F [m/s]
  double fermi_frequency = 0.0;  // omega_F [rad/s]
  double beta = 0.0;             // density-mode normalization, dimensionless
  double omega_m = 0.0;          // mechanical frequency [rad/s]
  double coupling_g = 0.0;       // optomechanical coupling [rad/s]
  double detuning = 0.0;         // effective cavity detuning Delta [rad/s]
  double kappa = 0.0;            // [rad/s]
  double eta = 0.0;              // [rad/s]
  double u0 = 0.0;               // [rad/s]

  // Kerr-like coefficient of the steady-state cubic, 4 g^2 / omega_M.
  double chi() const { return 4.0 * coupling_g * coupling_g / omega_m; }
};

enum class CheckStatus { ok, warn, fail };

struct RegimeCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  CheckStatus status = CheckStatus::ok;
};

/// Audit of the approximations behind the effective model. `fail` is
/// reserved for K >= k_F, where the linearized dispersion has no meaning.
struct RegimeReport {
  double k_over_kf = 0.0;
  double recoil = 0.0;  // side-mode recoil hbar(2K)^2/(2M) [rad/s]
  double recoil_over_omega_m = 0.0;
  double capacity = 0.0;  // K L / pi, particle-hole states in the kick window
  std::vector<RegimeCheck> checks;
  CheckStatus overall = CheckStatus::ok;
};

struct RegimeThresholds {
  double k_ratio_warn = 0.2;
  double recoil_ratio_warn = 0.2;
};

/// Deterministic, pure derivation of the effective model. Throws
/// std::invalid_argument on parameter-contract violations.
EffectiveModel build_effective_model(const PhysicalParams& p);

RegimeReport validate_regime(const EffectiveModel& m,
                             const RegimeThresholds& thr = {});

const char* to_string(CheckStatus s);

}  // namespace fermimirror
