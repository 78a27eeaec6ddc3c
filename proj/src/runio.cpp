#include "fermimirror/runio.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fermimirror/errors.hpp"
#include "fermimirror/rng.hpp"
#include "fermimirror/version.hpp"

namespace fermimirror {

std::string format_double(double x) {
  char buf[40];
  // %.17g round-trips doubles and is byte-stable across runs.
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw ConfigError("cannot open output file: " + path);
  out_ << "# " << kCsvVersion << "\n" << header << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file for checksum: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string model_hash(const EffectiveModel& m) {
  std::ostringstream os;
  os << format_double(m.wavenumber) << '|' << format_double(m.fermi_momentum)
     << '|' << format_double(m.fermi_velocity) << '|'
     << format_double(m.fermi_frequency) << '|' << format_double(m.beta) << '|'
     << format_double(m.omega_m) << '|' << format_double(m.coupling_g) << '|'
     << format_double(m.detuning) << '|' << format_double(m.kappa) << '|'
     << format_double(m.eta) << '|' << format_double(m.u0);
  const std::string s = os.str();
  return hex64(fnv1a64(s.data(), s.size()));
}

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string write_run_record(const std::string& dir, const RunRecord& rec) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = rec.command;
  j["config"] = nlohmann::json::parse(rec.config_snapshot.empty()
                                          ? std::string("null")
                                          : rec.config_snapshot);
  j["model_hash"] = rec.model_hash;
  j["seed"] = rec.seed;
  j["rng"] = rec.rng_identity.empty() ? kRngIdentity : rec.rng_identity;
  j["started_utc"] = rec.started_utc;
  j["finished_utc"] = rec.finished_utc;
  auto files = nlohmann::json::array();
  for (const auto& f : rec.files) {
    files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a", f.fnv1a}});
  }
  j["files"] = files;

  const std::string path =
      (std::filesystem::path(dir) / "run_record.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write run record: " + path);
  out << j.dump(2) << "\n";
  return path;
}

}  // namespace fermimirror
