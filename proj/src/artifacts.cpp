#include "nsv/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsv/errors.hpp"
#include "nsv/snapshot.hpp"

namespace nsv {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + tmp);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw ConfigError("write failed: " + tmp);
  }
  fs::rename(tmp, p);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingArtifactError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t field_checksum(const SpectralField& u) {
  const auto& c = u.coeffs();
  return fnv1a64(std::string(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(c[0])));
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string energy_csv(const Run& run) {
  std::string out = "t,h2,v2,a2,dtv2\n";
  for (const auto& r : run.energy)
    out += fmt_double(r.t) + ',' + fmt_double(r.h2) + ',' + fmt_double(r.v2) + ',' + fmt_double(r.a2) +
           ',' + fmt_double(r.dtv2) + '\n';
  return out;
}

std::vector<EnergyRecord> parse_energy_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "t,h2,v2,a2,dtv2") throw ConfigError("energy csv: bad header");
  std::vector<EnergyRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    EnergyRecord r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &r.t, &r.h2, &r.v2, &r.a2, &r.dtv2) != 5)
      throw ConfigError("energy csv: bad row '" + line + "'");
    out.push_back(r);
  }
  return out;
}

std::string budget_csv(const Run& run) {
  std::string out = "t,mass_change,dissipation,splitting,work_f,work_g,work_extra,work_B,work_memory,residual\n";
  for (const auto& b : run.budget)
    out += fmt_double(b.t) + ',' + fmt_double(b.mass_change) + ',' + fmt_double(b.dissipation) + ',' +
           fmt_double(b.splitting) + ',' + fmt_double(b.work_f) + ',' + fmt_double(b.work_g) + ',' +
           fmt_double(b.work_extra) + ',' + fmt_double(b.work_B) + ',' + fmt_double(b.work_memory) + ',' +
           fmt_double(b.residual) + '\n';
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "tau,d,d_zero\n";
  for (std::size_t i = 0; i < sweep.taus.size(); ++i) {
    const StateCloud& c = sweep.clouds.at(i);
    const ProcessState& s = c.members.at(0).state;
    const StateCloud z = zero_cloud(s.grid(), c.step, c.dt, s.history.steps_per_h());
    out += fmt_double(sweep.taus[i]) + ',' + fmt_double(sweep.d.at(i)) + ',' + fmt_double(semidistance(c, z)) +
           '\n';
  }
  return out;
}

std::string measure_csv(const DepthSweep& sweep) {
  std::string out = "functional,value,depth,residual,extrapolated\n";
  for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
    const DepthRow& row = sweep.rows[r];
    for (std::size_t k = 0; k < sweep.ids.size(); ++k) {
      out += sweep.ids[k] + ',' + fmt_double(row.value.at(k)) + ',' + fmt_double(row.depth) + ',' +
             fmt_double(row.residual.at(k)) + ',' +
             (row.extrapolated.empty() ? std::string() : fmt_double(row.extrapolated.at(k))) + '\n';
    }
  }
  return out;
}

nlohmann::json certificate_json(const BoundCertificate& c) {
  nlohmann::json j;
  j["id"] = c.id;
  j["verdict"] = verdict_name(c.verdict);
  j["min_margin"] = c.min_margin;
  j["tol"] = c.tol;
  j["constants"] = c.constants;
  j["note"] = c.note;
  j["times"] = c.times;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  if (!c.sample_verdicts.empty()) {
    nlohmann::json v = nlohmann::json::array();
    for (Verdict s : c.sample_verdicts) v.push_back(verdict_name(s));
    j["sample_verdicts"] = v;
  }
  return j;
}

std::string certificate_table(const std::vector<BoundCertificate>& certs) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %-13s %s\n", "certificate", "verdict", "min_margin");
  out += buf;
  for (const auto& c : certs) {
    std::snprintf(buf, sizeof buf, "%-14s %-13s %.6e\n", c.id.c_str(), verdict_name(c.verdict), c.min_margin);
    out += buf;
    if (!c.note.empty()) out += "  note: " + c.note + '\n';
  }
  return out;
}

std::string dump_sorted(const nlohmann::json& j) { return j.dump(2) + '\n'; }

std::string encode_checkpoint(const ProcessState& s, std::uint64_t manifest_hash) {
  std::ostringstream os(std::ios::binary);
  binio::put_magic(os, "NSVC");
  binio::put_u32(os, 1);
  binio::put_u64(os, manifest_hash);
  binio::put_u64(os, static_cast<std::uint64_t>(s.step));
  binio::put_f64(os, s.dt);
  binio::put_u32(os, static_cast<std::uint32_t>(s.history.steps_per_h()));
  binio::put_u32(os, s.explicit_prev ? 1u : 0u);
  const double t = s.time();
  write_snapshot(os, *s.u, t);
  for (std::size_t j = 0; j < s.history.size(); ++j) write_snapshot(os, *s.history.slot(j), t);
  if (s.explicit_prev) write_snapshot(os, *s.explicit_prev, t);
  return os.str();
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  binio::expect_magic(is, "NSVC");
  if (binio::get_u32(is) != 1) throw ConfigError("checkpoint: unsupported version");
  Checkpoint c;
  c.manifest_hash = binio::get_u64(is);
  c.state.step = static_cast<std::int64_t>(binio::get_u64(is));
  c.state.dt = binio::get_f64(is);
  const int nh = static_cast<int>(binio::get_u32(is));
  const bool has_prev = binio::get_u32(is) != 0;
  c.state.u = make_field_ptr(read_snapshot(is).field);
  std::vector<FieldPtr> slots;
  for (int j = 0; j <= nh; ++j) slots.push_back(make_field_ptr(read_snapshot(is).field));
  c.state.history = HistorySegment(c.state.dt, nh, std::move(slots));
  if (has_prev) c.state.explicit_prev = make_field_ptr(read_snapshot(is).field);
  return c;
}

void save_checkpoint(const std::string& path, const ProcessState& s, std::uint64_t manifest_hash) {
  write_file_atomic(path, encode_checkpoint(s, manifest_hash));
}

Checkpoint load_checkpoint(const std::string& path) { return decode_checkpoint(read_file(path)); }

}  // namespace nsv
