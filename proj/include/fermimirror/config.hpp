#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fermimirror/dynamics.hpp"
#include "fermimirror/edlab.hpp"
#include "fermimirror/model.hpp"

namespace fermimirror {

struct SweepBlock {
  std::string variable = "eta";  // "eta" or "delta"
  double from = 0.0;  // eta sweeps: units of kappa; delta sweeps: Hz
  double to = 0.0;
  int steps = 0;
  std::optional<double> eta_over_kappa;  // fixed drive for delta sweeps
  bool hysteresis = false;
};

struct SpectrumBlock {
  double eta_over_kappa = 0.0;
  std::string branch = "lowest-stable";  // or a 0-based index
  double omega_from_hz = 0.0;
  double omega_to_hz = 0.0;
  int points = 0;
  std::string convention = "printed-vacuum";
};

struct SimulateBlock {
  std::string mode = "meanfield";  // "meanfield" or "linear"
  double eta_over_kappa = 0.0;
  std::string branch = "lowest-stable";
  double dt_s = 0.0;
  long long steps = 0;
  int ensemble = 1;
  double burn_in = 0.0;
  std::string noise_convention = "symmetric-classical";
  std::optional<std::array<double, 4>> initial;
  double perturb = 0.0;  // relative kick applied to a branch initial state
  int psd_segments = 0;  // 0 = no spectrum output
  int psd_channel = 0;
};

struct EdBlock {
  int modes = 12;
  int fermions = 6;
  int photon_cutoff = 2;
  int kick = 1;
  double u0_hz = 0.0;
  double delta_hz = 0.0;
  double mass_kg = 0.0;
  double length_m = 0.0;
  int sector_levels = 6;  // lowest eigenvalues reported per photon sector
};

/// Parsed, schema-validated run configuration. Unknown keys are rejected
/// (fail closed); frequency-valued keys must carry the _hz suffix and are
/// converted to rad/s exactly once here.
struct RunConfig {
  PhysicalParams physical;
  RegimeThresholds regime;
  std::optional<SweepBlock> sweep;
  std::optional<SpectrumBlock> spectrum;
  std::optional<SimulateBlock> simulate;
  std::optional<EdBlock> edcheck;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::string source_json;  // canonical dump of the parsed input
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& j);

ed::EDConfig to_ed_config(const EdBlock& b);

}  // namespace fermimirror
