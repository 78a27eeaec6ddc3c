#include "fermimirror/model.hpp"

#include <cmath>
#include <stdexcept>

#include "fermimirror/constants.hpp"

namespace fermimirror {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::ok: return "ok";
    case CheckStatus::warn: return "warn";
    case CheckStatus::fail: return "fail";
  }
  return "?";
}

EffectiveModel build_effective_model(const PhysicalParams& p) {
  require(p.wavenumber.has_value() != p.wavelength.has_value(),
          "exactly one of wavenumber or wavelength must be given");
  double big_k;
  if (p.wavenumber) {
    require(*p.wavenumber > 0.0, "wavenumber must be positive");
    big_k = *p.wavenumber;
  } else {
    require(*p.wavelength > 0.0, "wavelength must be positive");
    big_k = kTwoPi / *p.wavelength;
  }

  require(p.cavity_length > 0.0, "cavity_length must be positive");
  require(p.atom_number > 0, "atom_number must be positive");
  require(p.atomic_mass > 0.0, "atomic_mass must be positive");
  require(p.kappa > 0.0, "kappa must be positive");
  require(p.eta >= 0.0, "eta must be nonnegative");

  const bool direct = p.dispersive_coupling.has_value();
  const bool pair = p.rabi_g0.has_value() || p.pump_atom_detuning.has_value();
  require(direct != pair,
          "give either dispersive_coupling or the {rabi_g0, "
          "pump_atom_detuning} pair, not both");
  double u0;
  if (direct) {
    require(*p.dispersive_coupling != 0.0,
            "dispersive_coupling must be nonzero");
    u0 = *p.dispersive_coupling;
  } else {
    require(p.rabi_g0.has_value() && p.pump_atom_detuning.has_value(),
            "rabi_g0 and pump_atom_detuning must be given together");
    require(*p.pump_atom_detuning != 0.0,
            "pump_atom_detuning must be nonzero (omega_L != omega_a)");
    require(*p.rabi_g0 > 0.0, "rabi_g0 must be positive");
    u0 = (*p.rabi_g0) * (*p.rabi_g0) / *p.pump_atom_detuning;
  }

  double k_f;
  if (p.kf_over_k) {
    require(*p.kf_over_k > 0.0, "kf_over_k must be positive");
    k_f = *p.kf_over_k * big_k;
  } else {
    k_f = kPi * static_cast<double>(p.atom_number) / p.cavity_length;
  }

  EffectiveModel m;
  m.wavenumber = big_k;
  m.fermi_momentum = k_f;
  m.fermi_velocity = kHbar * k_f / p.atomic_mass;
  m.fermi_frequency = kHbar * k_f * k_f / (2.0 * p.atomic_mass);
  m.beta = std::sqrt(kPi / (big_k * p.cavity_length));
  m.omega_m = 2.0 * big_k * m.fermi_velocity;
  m.coupling_g = u0 / (4.0 * m.beta);
  m.detuning = -p.pump_cavity_detuning +
               u0 * static_cast<double>(p.atom_number) / 2.0;
  m.kappa = p.kappa;
  m.eta = p.eta;
  m.u0 = u0;
  return m;
}

RegimeReport validate_regime(const EffectiveModel& m,
                             const RegimeThresholds& thr) {
  RegimeReport r;
  r.k_over_kf = m.wavenumber / m.fermi_momentum;
  // hbar/M = v_F/k_F, so the side-mode recoil needs no explicit mass.
  r.recoil = 2.0 * m.wavenumber * m.wavenumber *
             (m.fermi_velocity / m.fermi_momentum);
  r.recoil_over_omega_m = r.recoil / m.omega_m;
  r.capacity = 1.0 / (m.beta * m.beta);  // == K L / pi

  auto status_of = [](double v, double warn, bool can_fail) {
    if (can_fail && v >= 1.0) return CheckStatus::fail;
    if (v > warn) return CheckStatus::warn;
    return CheckStatus::ok;
  };

  r.checks.push_back({"k_over_kf", r.k_over_kf, thr.k_ratio_warn,
                      status_of(r.k_over_kf, thr.k_ratio_warn, true)});
  r.checks.push_back(
      {"recoil_over_omega_m", r.recoil_over_omega_m, thr.recoil_ratio_warn,
       status_of(r.recoil_over_omega_m, thr.recoil_ratio_warn, false)});

  r.overall = CheckStatus::ok;
  for (const auto& c : r.checks) {
    if (static_cast<int>(c.status) > static_cast<int>(r.overall))
      r.overall = c.status;
  }
  return r;
}

}  // namespace fermimirror
