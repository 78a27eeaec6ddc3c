#include "fermimirror/shell.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include <nlohmann/json.hpp>

#include "fermimirror/constants.hpp"
#include "fermimirror/dynamics.hpp"
#include "fermimirror/edlab.hpp"
#include "fermimirror/errors.hpp"
#include "fermimirror/rng.hpp"
#include "fermimirror/spectra.hpp"
#include "fermimirror/stability.hpp"
#include "fermimirror/steady.hpp"
#include "fermimirror/version.hpp"

namespace fermimirror {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fd(double x) { return format_double(x); }

void add_manifest(RunRecord& rec, const std::string& dir,
                  const std::string& rel) {
  const std::string full = (fs::path(dir) / rel).string();
  ManifestEntry e;
  e.path = rel;
  e.bytes = fs::file_size(full);
  e.fnv1a = hex64(fnv1a64_file(full));
  rec.files.push_back(e);
}

void write_json_file(const std::string& dir, const std::string& rel,
                     const json& j) {
  const std::string full = (fs::path(dir) / rel).string();
  std::ofstream out(full, std::ios::binary);
  if (!out) throw ConfigError("cannot write output: " + full);
  out << j.dump(2) << "\n";
}

json model_json(const EffectiveModel& m, const RegimeReport& r) {
  json j;
  j["wavenumber_per_m"] = m.wavenumber;
  j["fermi_momentum_per_m"] = m.fermi_momentum;
  j["fermi_velocity_m_per_s"] = m.fermi_velocity;
  j["fermi_frequency_rad_per_s"] = m.fermi_frequency;
  j["beta"] = m.beta;
  j["omega_m_rad_per_s"] = m.omega_m;
  j["coupling_g_rad_per_s"] = m.coupling_g;
  j["detuning_rad_per_s"] = m.detuning;
  j["kappa_rad_per_s"] = m.kappa;
  j["eta_rad_per_s"] = m.eta;
  j["u0_rad_per_s"] = m.u0;
  j["chi_rad_per_s"] = m.chi();
  json reg;
  reg["k_over_kf"] = r.k_over_kf;
  reg["recoil_rad_per_s"] = r.recoil;
  reg["recoil_over_omega_m"] = r.recoil_over_omega_m;
  reg["capacity"] = r.capacity;
  reg["overall"] = to_string(r.overall);
  auto checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"status", to_string(c.status)}});
  reg["checks"] = checks;
  j["regime"] = reg;
  return j;
}

struct BranchPick {
  SteadyStateBranch state;
  StabilityVerdict verdict;
  int index = -1;
};

BranchPick pick_branch(const EffectiveModel& m, double eta, double delta,
                       const std::string& sel) {
  const auto branches = steady_states(m, eta, delta);
  std::vector<StabilityVerdict> verdicts;
  verdicts.reserve(branches.size());
  for (const auto& b : branches) verdicts.push_back(classify(m, b));

  if (sel == "lowest-stable" || sel.empty()) {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (verdicts[i].cls != StabilityClass::unstable)
        return {branches[i], verdicts[i], static_cast<int>(i)};
    }
    throw NumericError("no stable branch at this operating point");
  }
  std::size_t idx = 0;
  try {
    idx = static_cast<std::size_t>(std::stoul(sel));
  } catch (...) {
    throw ConfigError("branch selector must be 'lowest-stable' or an index");
  }
  if (idx >= branches.size())
    throw ConfigError("branch index out of range (found " +
                      std::to_string(branches.size()) + " branches)");
  return {branches[idx], verdicts[idx], static_cast<int>(idx)};
}

void write_branches_csv(const std::string& dir, const std::string& rel,
                        const EffectiveModel& m,
                        const std::vector<SteadyStateBranch>& branches) {
  CsvWriter csv((fs::path(dir) / rel).string(), kBranchCsvHeader);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    const StabilityVerdict v = classify(m, b);
    csv.row({std::to_string(i), fd(b.photon_number), fd(b.field_amplitude),
             fd(b.mirror_position), fd(b.delta_tilde), fd(b.residual),
             std::string(1, stability_code(v.cls)), fd(v.margin),
             b.fold ? "1" : "0"});
  }
  csv.close();
}

void write_sweep_csv(const std::string& dir, const std::string& rel,
                     const BistabilityCurve& curve) {
  CsvWriter csv((fs::path(dir) / rel).string(), kSweepCsvHeader);
  for (const auto& pt : curve.points) {
    for (std::size_t bi = 0; bi < pt.branches.size(); ++bi) {
      const auto& br = pt.branches[bi];
      csv.row({fd(pt.sweep_value), std::to_string(bi),
               fd(br.state.photon_number), fd(br.state.mirror_position),
               fd(br.state.delta_tilde),
               std::string(1, stability_code(br.cls)),
               br.state.fold ? "1" : "0"});
    }
  }
  csv.close();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

}  // namespace

int map_exit_code(const std::exception& e) {
  if (dynamic_cast<const RegimeFailure*>(&e)) return kExitRegime;
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitConfig;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  return kExitNumeric;
}

RunRecord run_command(const std::string& command, const RunConfig& cfg_in,
                      const CliOverrides& ov) {
  RunConfig cfg = cfg_in;
  if (ov.out_dir) cfg.output_dir = *ov.out_dir;
  if (ov.seed) cfg.seed = *ov.seed;

  RunRecord rec;
  rec.command = command;
  rec.seed = cfg.seed;
  rec.rng_identity = kRngIdentity;
  rec.started_utc = utc_now_iso8601();
  {
    json snap = cfg.source_json.empty() ? json::object()
                                        : json::parse(cfg.source_json);
    json ovj = json::object();
    if (ov.seed) ovj["seed"] = *ov.seed;
    if (ov.out_dir) ovj["out"] = *ov.out_dir;
    if (ov.eta_over_kappa) ovj["eta_over_kappa"] = *ov.eta_over_kappa;
    if (ov.from) ovj["from"] = *ov.from;
    if (ov.to) ovj["to"] = *ov.to;
    if (ov.steps) ovj["steps"] = *ov.steps;
    if (ov.omega_from_hz) ovj["omega_from_hz"] = *ov.omega_from_hz;
    if (ov.omega_to_hz) ovj["omega_to_hz"] = *ov.omega_to_hz;
    if (!ovj.empty()) snap["cli_overrides"] = ovj;
    rec.config_snapshot = snap.dump();
  }

  const EffectiveModel m = build_effective_model(cfg.physical);
  const RegimeReport regime = validate_regime(m, cfg.regime);
  rec.model_hash = model_hash(m);
  if (ov.strict && regime.overall == CheckStatus::fail)
    throw RegimeFailure("regime validity check failed (K >= k_F)");

  fs::create_directories(cfg.output_dir);
  const std::string& dir = cfg.output_dir;

  const double eta_default = cfg.physical.eta;

  if (command == "model") {
    write_json_file(dir, "model.json", model_json(m, regime));
    add_manifest(rec, dir, "model.json");

  } else if (command == "steady") {
    double eta = eta_default;
    if (ov.eta_over_kappa) eta = *ov.eta_over_kappa * m.kappa;
    const auto branches = steady_states(m, eta, m.detuning);
    write_branches_csv(dir, "branches.csv", m, branches);
    add_manifest(rec, dir, "branches.csv");

  } else if (command == "sweep") {
    SweepBlock blk = cfg.sweep.value_or(SweepBlock{});
    if (!cfg.sweep && !(ov.from && ov.to && ov.steps))
      throw ConfigError("sweep: missing sweep block or --from/--to/--steps");
    if (ov.from) blk.from = *ov.from;
    if (ov.to) blk.to = *ov.to;
    if (ov.steps) blk.steps = *ov.steps;
    if (ov.eta_over_kappa) blk.eta_over_kappa = *ov.eta_over_kappa;

    BistabilityCurve curve;
    if (blk.variable == "eta") {
      curve = sweep(m, SweepVariable::drive, blk.from * m.kappa,
                    blk.to * m.kappa, blk.steps, m.detuning);
    } else {
      const double eta =
          blk.eta_over_kappa ? *blk.eta_over_kappa * m.kappa : eta_default;
      curve = sweep(m, SweepVariable::detuning, kTwoPi * blk.from,
                    kTwoPi * blk.to, blk.steps, eta);
    }
    classify_curve(curve);
    write_sweep_csv(dir, "sweep.csv", curve);
    add_manifest(rec, dir, "sweep.csv");

    if (blk.hysteresis) {
      for (const auto dirn : {SweepDirection::up, SweepDirection::down}) {
        const HysteresisTrace tr = hysteresis_trace(curve, dirn);
        const std::string rel = dirn == SweepDirection::up ? "hysteresis_up.csv"
                                                           : "hysteresis_down.csv";
        CsvWriter csv((fs::path(dir) / rel).string(),
                      "sweep_value,n,branch_index,gap,jump");
        for (const auto& tp : tr.points)
          csv.row({fd(tp.sweep_value), fd(tp.n), std::to_string(tp.branch_pos),
                   tp.gap ? "1" : "0", tp.jump ? "1" : "0"});
        csv.close();
        add_manifest(rec, dir, rel);
      }
    }

  } else if (command == "threshold") {
    const BistabilityThreshold t = bistability_threshold(m);
    json j;
    j["bistable_possible"] = t.bistable_possible;
    if (t.bistable_possible) {
      j["eta_c_rad_per_s"] = t.eta_c;
      j["eta_c_over_kappa"] = t.eta_c / m.kappa;
      j["delta_c_rad_per_s"] = t.delta_c;
      j["n_c"] = t.n_c;
      j["eta_c_scan_rad_per_s"] = t.eta_c_scan;
      j["delta_c_scan_rad_per_s"] = t.delta_c_scan;
    } else {
      j["note"] = "never bistable (chi = 0)";
    }
    write_json_file(dir, "threshold.json", j);
    add_manifest(rec, dir, "threshold.json");
    if (t.bistable_possible)
      std::cout << "eta_c/kappa = " << t.eta_c / m.kappa
                << "  Delta_c = " << t.delta_c << " rad/s  n_c = " << t.n_c
                << "\n";
    else
      std::cout << "never bistable (chi = 0)\n";

  } else if (command == "spectrum") {
    if (!cfg.spectrum) throw ConfigError("spectrum: missing spectrum block");
    SpectrumBlock blk = *cfg.spectrum;
    if (ov.eta_over_kappa) blk.eta_over_kappa = *ov.eta_over_kappa;
    if (ov.omega_from_hz) blk.omega_from_hz = *ov.omega_from_hz;
    if (ov.omega_to_hz) blk.omega_to_hz = *ov.omega_to_hz;
    if (ov.steps) blk.points = *ov.steps;

    const double eta = blk.eta_over_kappa * m.kappa;
    const BranchPick pick = pick_branch(m, eta, m.detuning, blk.branch);
    const auto grid = linspace(kTwoPi * blk.omega_from_hz,
                               kTwoPi * blk.omega_to_hz, blk.points);
    const NoiseConvention conv = noise_convention_by_name(blk.convention);
    const auto tm = transfer_spectrum(m, pick.state, grid, conv);
    const auto pr = printed_spectrum(m, pick.state, grid);

    CsvWriter csv((fs::path(dir) / "spectrum.csv").string(),
                  kSpectrumCsvHeader);
    for (std::size_t i = 0; i < tm.size(); ++i)
      csv.row({fd(tm[i].omega), fd(tm[i].s_xm), fd(tm[i].s_xc),
               fd(tm[i].s_pc), fd(pr[i].s_xc), fd(pr[i].s_pc)});
    csv.close();
    add_manifest(rec, dir, "spectrum.csv");

  } else if (command == "simulate") {
    if (!cfg.simulate) throw ConfigError("simulate: missing simulate block");
    SimulateBlock blk = *cfg.simulate;
    if (ov.eta_over_kappa) blk.eta_over_kappa = *ov.eta_over_kappa;

    const double eta = blk.eta_over_kappa * m.kappa;
    SimConfig sim;
    sim.dt = blk.dt_s;
    sim.steps = blk.steps;
    sim.ensemble = blk.ensemble;
    sim.seed = cfg.seed;
    sim.burn_in = blk.burn_in;
    sim.noise_convention = blk.noise_convention;

    Trajectory tr;
    if (blk.mode == "meanfield") {
      std::array<double, 4> init{};
      if (blk.initial) {
        init = *blk.initial;
      } else {
        const BranchPick pick = pick_branch(m, eta, m.detuning, blk.branch);
        // Complex steady amplitude in the unrotated frame.
        const std::complex<double> cs =
            eta / std::complex<double>(m.kappa, pick.state.delta_tilde);
        init = {pick.state.mirror_position, 0.0, cs.real(), cs.imag()};
        for (auto& v : init) v *= (1.0 + blk.perturb);
      }
      sim.initial = init;
      tr = simulate_meanfield(m, eta, m.detuning, init, sim);
    } else {
      const BranchPick pick = pick_branch(m, eta, m.detuning, blk.branch);
      if (blk.initial) sim.initial = *blk.initial;
      tr = simulate_linear(m, pick.state, sim);
      if (blk.psd_segments > 0) {
        const Psd psd =
            ensemble_linear_psd(m, pick.state, sim, blk.psd_channel,
                                blk.psd_segments);
        CsvWriter csv((fs::path(dir) / "psd.csv").string(), kPsdCsvHeader);
        for (std::size_t i = 0; i < psd.omega.size(); ++i)
          csv.row({fd(psd.omega[i]), fd(psd.density[i])});
        csv.close();
        add_manifest(rec, dir, "psd.csv");
      }
    }

    CsvWriter csv((fs::path(dir) / "trajectory.csv").string(),
                  kTrajectoryCsvHeader);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
      const double t = tr.t0 + static_cast<double>(i) * tr.dt;
      csv.row({fd(t), fd(tr.states[i][0]), fd(tr.states[i][1]),
               fd(tr.states[i][2]), fd(tr.states[i][3])});
    }
    csv.close();
    add_manifest(rec, dir, "trajectory.csv");

  } else if (command == "edcheck") {
    if (!cfg.edcheck) throw ConfigError("edcheck: missing edcheck block");
    const EdBlock& blk = *cfg.edcheck;
    const ed::EDSystem sys = ed::build_system(to_ed_config(blk));

    const double comm = ed::commutator_check(sys);
    const double cross = ed::cross_commutator_check(sys);
    const ed::CouplingCheck coup = ed::coupling_element_check(sys);
    const ed::SpreadReport spread = ed::ph_energy_spread(sys);

    json j;
    j["dimension"] = ed::basis_dimension(sys.cfg);
    j["k_fermi_per_m"] = sys.fermi_momentum;
    j["beta"] = sys.beta;
    j["omega_m_rad_per_s"] = sys.omega_m;
    j["coupling_g_rad_per_s"] = sys.coupling_g;
    j["commutator"] = comm;
    j["cross_commutator"] = cross;
    j["coupling_norm"] = coup.norm;
    j["coupling_expected"] = coup.expected;
    j["spread_min"] = spread.min_dev;
    j["spread_max"] = spread.max_dev;
    j["spread_mean"] = spread.mean_dev;
    j["spread_bound"] = spread.bound;
    auto sectors = json::array();
    for (int nc = 0; nc <= sys.cfg.photon_cutoff && blk.sector_levels > 0;
         ++nc) {
      const auto evs = ed::lowest_excitations(sys, nc, blk.sector_levels);
      sectors.push_back({{"photon_sector", nc}, {"levels", evs}});
    }
    j["sectors"] = sectors;
    write_json_file(dir, "edcheck.json", j);
    add_manifest(rec, dir, "edcheck.json");

    auto line = [](const std::string& name, bool ok, double got,
                   double want) {
      std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << got
                << " (expected " << want << ")\n";
    };
    line("commutator <FS|[b,b+]|FS>", std::abs(comm - 1.0) < 1e-10, comm, 1.0);
    line("cross commutator", std::abs(cross) < 1e-10, cross, 0.0);
    line("coupling norm", std::abs(coup.norm - coup.expected) <=
                              1e-10 * std::max(1.0, coup.expected),
         coup.norm, coup.expected);
    line("dispersion spread max", spread.max_dev <= spread.bound + 1e-12,
         spread.max_dev, spread.bound);

  } else {
    throw ConfigError("unknown command: " + command);
  }

  rec.finished_utc = utc_now_iso8601();
  write_run_record(dir, rec);
  return rec;
}

}  // namespace fermimirror
