#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsv/attractor.hpp"
#include "nsv/certificates.hpp"
#include "nsv/measure.hpp"
#include "nsv/run.hpp"

namespace nsv {

/// Write to `path.tmp` then rename over `path`; parent directories are created.
void write_file_atomic(const std::string& path, const std::string& bytes);
/// Whole file as bytes; MissingArtifactError if it cannot be opened.
std::string read_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);
/// FNV-1a of the coefficient bytes.
std::uint64_t field_checksum(const SpectralField& u);

/// Shortest round-trip decimal form ("%.17g").
std::string fmt_double(double v);

/// t,h2,v2,a2,dtv2 per step.
std::string energy_csv(const Run& run);
/// Parse energy_csv output back into records.
std::vector<EnergyRecord> parse_energy_csv(const std::string& text);
std::string budget_csv(const Run& run);
/// tau,d,d_zero per depth (d_zero: semidistance to the zero state).
std::string sweep_csv(const SweepResult& sweep);
/// functional,value,depth,residual,extrapolated per depth row.
std::string measure_csv(const DepthSweep& sweep);

nlohmann::json certificate_json(const BoundCertificate& c);
/// One line per certificate: id, verdict, min margin.
std::string certificate_table(const std::vector<BoundCertificate>& certs);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump_sorted(const nlohmann::json& j);

/// Checkpoint "NSVC": u32 version, u64 manifest hash, i64 step, f64 dt,
/// u32 steps_per_h, u32 has_prev, then snapshot records of u, the history
/// slots oldest first and the previous explicit term (if present).
struct Checkpoint {
  std::uint64_t manifest_hash = 0;
  ProcessState state;
};

std::string encode_checkpoint(const ProcessState& s, std::uint64_t manifest_hash);
Checkpoint decode_checkpoint(const std::string& bytes);
void save_checkpoint(const std::string& path, const ProcessState& s, std::uint64_t manifest_hash);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace nsv
