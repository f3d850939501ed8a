#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsv/spectral_field.hpp"

namespace nsv {

/// Field snapshot: 4-byte magic "NSVF", u32 version, u32 dim, u32 n,
/// f64 box_length, f64 time, u64 coefficient count, then (re, im) f64 pairs in
/// storage order. All values little-endian.
struct Snapshot {
  SpectralField field;
  double time = 0.0;
};

void write_snapshot(std::ostream& os, const SpectralField& u, double time);
Snapshot read_snapshot(std::istream& is);

void save_snapshot(const std::string& path, const SpectralField& u, double time);
Snapshot load_snapshot(const std::string& path);

/// Snapshot bundle: magic "NSVB", u32 version, u64 count, then per entry a
/// u32 length-prefixed id string followed by a snapshot record.
struct BundleEntry {
  std::string id;
  Snapshot snapshot;
};

void save_bundle(const std::string& path, const std::vector<BundleEntry>& entries);
std::vector<BundleEntry> load_bundle(const std::string& path);

namespace binio {
void put_u32(std::ostream& os, std::uint32_t v);
void put_u64(std::ostream& os, std::uint64_t v);
void put_f64(std::ostream& os, double v);
std::uint32_t get_u32(std::istream& is);
std::uint64_t get_u64(std::istream& is);
double get_f64(std::istream& is);
void put_magic(std::ostream& os, const char magic[4]);
void expect_magic(std::istream& is, const char magic[4]);
}  // namespace binio

}  // namespace nsv
