#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "fermimirror/model.hpp"

namespace fermimirror {

// Stable, versioned CSV headers; pinned by a golden-file test.
inline constexpr const char* kSweepCsvHeader =
    "sweep_value,branch_index,n,X_M,delta_tilde,stability,fold_flag";
inline constexpr const char* kSpectrumCsvHeader =
    "omega,S_XM,S_Xc_transfer,S_Pc_transfer,S_Xc_printed,S_Pc_printed";
inline constexpr const char* kTrajectoryCsvHeader = "t,x_m,p_m,x,p";
inline constexpr const char* kPsdCsvHeader = "omega,density";
inline constexpr const char* kBranchCsvHeader =
    "branch_index,n,c_s,X_M,delta_tilde,residual,stability,margin,fold_flag";
inline constexpr const char* kCsvVersion = "fermimirror-csv v1";

/// Byte-stable formatting: shortest round-trip decimal for doubles.
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header);
  void row(const std::vector<std::string>& cells);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

/// Canonical content hash of an effective model.
std::string model_hash(const EffectiveModel& m);

struct ManifestEntry {
  std::string path;  // relative to the run directory
  std::uint64_t bytes = 0;
  std::string fnv1a;
};

/// Reproducibility sidecar: config snapshot, model hash, tool version,
/// seeds, timestamps, and a checksummed manifest of every emitted file.
struct RunRecord {
  std::string command;
  std::string config_snapshot;  // canonical JSON text
  std::string model_hash;
  std::uint64_t seed = 0;
  std::string rng_identity;
  std::string started_utc;
  std::string finished_utc;
  std::vector<ManifestEntry> files;
};

std::string utc_now_iso8601();

/// Serializes the record to <dir>/run_record.json (adds itself last,
/// unchecksummed) and returns the absolute path.
std::string write_run_record(const std::string& dir, const RunRecord& rec);

}  // namespace fermimirror
