#include "fermimirror/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "fermimirror/constants.hpp"
#include "fermimirror/errors.hpp"

namespace fermimirror {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (allowed.count(k)) continue;
    // Known frequency stems must carry the _hz suffix.
    if (allowed.count(k + "_hz"))
      fail(path + "." + k, "frequency keys require the _hz suffix (use " + k +
                               "_hz)");
    fail(path + "." + k, "unknown key");
  }
}

double get_num(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path + "." + key, "missing");
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_num_or(const json& j, const std::string& path,
                  const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  return get_num(j, path, key);
}

long long get_int(const json& j, const std::string& path,
                  const std::string& key) {
  if (!j.contains(key)) fail(path + "." + key, "missing");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long long>();
}

std::string get_str_or(const json& j, const std::string& path,
                       const std::string& key, const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

double hz(double v) { return kTwoPi * v; }

PhysicalParams parse_physical(const json& j) {
  const std::string path = "physical";
  check_keys(j, path,
             {"wavelength_m", "wavenumber_per_m", "cavity_length_m",
              "atom_number", "atomic_mass_kg", "u0_hz", "g0_hz",
              "pump_atom_detuning_hz", "kappa_hz", "eta_hz",
              "pump_cavity_detuning_hz", "kf_over_k"});

  PhysicalParams p;
  const bool has_lambda = j.contains("wavelength_m");
  const bool has_k = j.contains("wavenumber_per_m");
  if (has_lambda == has_k)
    fail(path, "give exactly one of wavelength_m or wavenumber_per_m");
  if (has_lambda) p.wavelength = get_num(j, path, "wavelength_m");
  if (has_k) p.wavenumber = get_num(j, path, "wavenumber_per_m");

  p.cavity_length = get_num(j, path, "cavity_length_m");
  p.atom_number = get_int(j, path, "atom_number");
  p.atomic_mass = get_num(j, path, "atomic_mass_kg");

  const bool has_u0 = j.contains("u0_hz");
  const bool has_g0 = j.contains("g0_hz") || j.contains("pump_atom_detuning_hz");
  if (has_u0 == has_g0)
    fail(path,
         "give exactly one of u0_hz or the {g0_hz, pump_atom_detuning_hz} "
         "pair");
  if (has_u0) p.dispersive_coupling = hz(get_num(j, path, "u0_hz"));
  if (has_g0) {
    p.rabi_g0 = hz(get_num(j, path, "g0_hz"));
    p.pump_atom_detuning = hz(get_num(j, path, "pump_atom_detuning_hz"));
  }

  p.kappa = hz(get_num(j, path, "kappa_hz"));
  p.eta = hz(get_num_or(j, path, "eta_hz", 0.0));
  p.pump_cavity_detuning = hz(get_num_or(j, path, "pump_cavity_detuning_hz", 0.0));
  if (j.contains("kf_over_k")) p.kf_over_k = get_num(j, path, "kf_over_k");
  return p;
}

SweepBlock parse_sweep(const json& j) {
  const std::string path = "sweep";
  check_keys(j, path,
             {"variable", "from", "to", "steps", "eta_over_kappa",
              "hysteresis"});
  SweepBlock b;
  b.variable = get_str_or(j, path, "variable", "eta");
  if (b.variable != "eta" && b.variable != "delta")
    fail(path + ".variable", "must be 'eta' or 'delta'");
  b.from = get_num(j, path, "from");
  b.to = get_num(j, path, "to");
  b.steps = static_cast<int>(get_int(j, path, "steps"));
  if (j.contains("eta_over_kappa"))
    b.eta_over_kappa = get_num(j, path, "eta_over_kappa");
  if (j.contains("hysteresis")) {
    if (!j.at("hysteresis").is_boolean())
      fail(path + ".hysteresis", "expected a boolean");
    b.hysteresis = j.at("hysteresis").get<bool>();
  }
  return b;
}

SpectrumBlock parse_spectrum(const json& j) {
  const std::string path = "spectrum";
  check_keys(j, path,
             {"eta_over_kappa", "branch", "omega_from_hz", "omega_to_hz",
              "points", "convention"});
  SpectrumBlock b;
  b.eta_over_kappa = get_num(j, path, "eta_over_kappa");
  b.branch = get_str_or(j, path, "branch", "lowest-stable");
  b.omega_from_hz = get_num(j, path, "omega_from_hz");
  b.omega_to_hz = get_num(j, path, "omega_to_hz");
  b.points = static_cast<int>(get_int(j, path, "points"));
  b.convention = get_str_or(j, path, "convention", "printed-vacuum");
  return b;
}

SimulateBlock parse_simulate(const json& j) {
  const std::string path = "simulate";
  check_keys(j, path,
             {"mode", "eta_over_kappa", "branch", "dt_s", "steps", "ensemble",
              "burn_in", "noise_convention", "initial", "perturb",
              "psd_segments", "psd_channel"});
  SimulateBlock b;
  b.mode = get_str_or(j, path, "mode", "meanfield");
  if (b.mode != "meanfield" && b.mode != "linear")
    fail(path + ".mode", "must be 'meanfield' or 'linear'");
  b.eta_over_kappa = get_num(j, path, "eta_over_kappa");
  b.branch = get_str_or(j, path, "branch", "lowest-stable");
  b.dt_s = get_num(j, path, "dt_s");
  b.steps = get_int(j, path, "steps");
  b.ensemble = static_cast<int>(
      j.contains("ensemble") ? get_int(j, path, "ensemble") : 1);
  b.burn_in = get_num_or(j, path, "burn_in", 0.0);
  b.noise_convention =
      get_str_or(j, path, "noise_convention", "symmetric-classical");
  if (j.contains("initial")) {
    const auto& arr = j.at("initial");
    if (!arr.is_array() || arr.size() != 4)
      fail(path + ".initial", "expected an array of 4 numbers");
    std::array<double, 4> init{};
    for (int i = 0; i < 4; ++i) init[static_cast<std::size_t>(i)] =
        arr.at(static_cast<std::size_t>(i)).get<double>();
    b.initial = init;
  }
  b.perturb = get_num_or(j, path, "perturb", 0.0);
  b.psd_segments = static_cast<int>(
      j.contains("psd_segments") ? get_int(j, path, "psd_segments") : 0);
  b.psd_channel = static_cast<int>(
      j.contains("psd_channel") ? get_int(j, path, "psd_channel") : 0);
  return b;
}

EdBlock parse_ed(const json& j) {
  const std::string path = "edcheck";
  check_keys(j, path,
             {"modes", "fermions", "photon_cutoff", "kick", "u0_hz",
              "delta_hz", "mass_kg", "length_m", "sector_levels"});
  EdBlock b;
  b.modes = static_cast<int>(get_int(j, path, "modes"));
  b.fermions = static_cast<int>(get_int(j, path, "fermions"));
  b.photon_cutoff = static_cast<int>(
      j.contains("photon_cutoff") ? get_int(j, path, "photon_cutoff") : 2);
  b.kick = static_cast<int>(j.contains("kick") ? get_int(j, path, "kick") : 1);
  b.u0_hz = get_num(j, path, "u0_hz");
  b.delta_hz = get_num_or(j, path, "delta_hz", 0.0);
  b.mass_kg = get_num(j, path, "mass_kg");
  b.length_m = get_num(j, path, "length_m");
  b.sector_levels = static_cast<int>(
      j.contains("sector_levels") ? get_int(j, path, "sector_levels") : 6);
  return b;
}

}  // namespace

RunConfig parse_config_json(const json& j) {
  check_keys(j, "config",
             {"physical", "regime", "sweep", "spectrum", "simulate", "edcheck",
              "output_dir", "seed"});
  if (!j.contains("physical")) fail("config.physical", "missing");

  RunConfig cfg;
  cfg.physical = parse_physical(j.at("physical"));
  if (j.contains("regime")) {
    const auto& r = j.at("regime");
    check_keys(r, "regime", {"warn_k_ratio", "warn_recoil_ratio"});
    cfg.regime.k_ratio_warn = get_num_or(r, "regime", "warn_k_ratio", 0.2);
    cfg.regime.recoil_ratio_warn =
        get_num_or(r, "regime", "warn_recoil_ratio", 0.2);
  }
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
  if (j.contains("spectrum")) cfg.spectrum = parse_spectrum(j.at("spectrum"));
  if (j.contains("simulate")) cfg.simulate = parse_simulate(j.at("simulate"));
  if (j.contains("edcheck")) cfg.edcheck = parse_ed(j.at("edcheck"));
  cfg.output_dir = get_str_or(j, "config", "output_dir", "out");
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer())
      fail("config.seed", "expected an integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.source_json = j.dump();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config_json(j);
}

ed::EDConfig to_ed_config(const EdBlock& b) {
  ed::EDConfig c;
  c.modes = b.modes;
  c.n_fermions = b.fermions;
  c.photon_cutoff = b.photon_cutoff;
  c.kick = b.kick;
  c.u0 = kTwoPi * b.u0_hz;
  c.delta = kTwoPi * b.delta_hz;
  c.eta = 0.0;
  c.mass = b.mass_kg;
  c.length = b.length_m;
  return c;
}

}  // namespace fermimirror
