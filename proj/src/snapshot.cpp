#include "nsv/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nsv/artifacts.hpp"
#include "nsv/errors.hpp"

namespace nsv {

namespace binio {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

namespace {
void read_exact(std::istream& is, void* dst, std::size_t n) {
  is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (!is) throw ConfigError("binary read: truncated input");
}
}  // namespace

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v;
  read_exact(is, &v, 4);
  return v;
}
std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v;
  read_exact(is, &v, 8);
  return v;
}
double get_f64(std::istream& is) {
  double v;
  read_exact(is, &v, 8);
  return v;
}
void put_magic(std::ostream& os, const char magic[4]) { os.write(magic, 4); }
void expect_magic(std::istream& is, const char magic[4]) {
  char got[4];
  read_exact(is, got, 4);
  if (std::memcmp(got, magic, 4) != 0)
    throw ConfigError(std::string("binary read: bad magic, expected ") + std::string(magic, 4));
}

}  // namespace binio

namespace {
constexpr std::uint32_t kVersion = 1;
}

void write_snapshot(std::ostream& os, const SpectralField& u, double time) {
  using namespace binio;
  put_magic(os, "NSVF");
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(u.grid().dim()));
  put_u32(os, static_cast<std::uint32_t>(u.grid().n()));
  put_f64(os, u.grid().box_length());
  put_f64(os, time);
  put_u64(os, u.size());
  for (const Complex& c : u.coeffs()) {
    put_f64(os, c.real());
    put_f64(os, c.imag());
  }
}

Snapshot read_snapshot(std::istream& is) {
  using namespace binio;
  expect_magic(is, "NSVF");
  if (get_u32(is) != kVersion) throw ConfigError("snapshot: unsupported version");
  const int dim = static_cast<int>(get_u32(is));
  const int n = static_cast<int>(get_u32(is));
  const double box = get_f64(is);
  const double time = get_f64(is);
  Grid g(dim, n, box);
  const std::uint64_t count = get_u64(is);
  if (count != g.num_coeffs()) throw ConfigError("snapshot: coefficient count mismatch");
  std::vector<Complex> c(count);
  for (auto& x : c) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    x = Complex{re, im};
  }
  return Snapshot{SpectralField(g, std::move(c)), time};
}

void save_snapshot(const std::string& path, const SpectralField& u, double time) {
  std::ostringstream os(std::ios::binary);
  write_snapshot(os, u, time);
  write_file_atomic(path, os.str());
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingArtifactError("cannot open snapshot " + path);
  return read_snapshot(is);
}

void save_bundle(const std::string& path, const std::vector<BundleEntry>& entries) {
  using namespace binio;
  std::ostringstream os(std::ios::binary);
  put_magic(os, "NSVB");
  put_u32(os, kVersion);
  put_u64(os, entries.size());
  for (const auto& e : entries) {
    put_u32(os, static_cast<std::uint32_t>(e.id.size()));
    os.write(e.id.data(), static_cast<std::streamsize>(e.id.size()));
    write_snapshot(os, e.snapshot.field, e.snapshot.time);
  }
  write_file_atomic(path, os.str());
}

std::vector<BundleEntry> load_bundle(const std::string& path) {
  using namespace binio;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingArtifactError("cannot open bundle " + path);
  expect_magic(is, "NSVB");
  if (get_u32(is) != kVersion) throw ConfigError("bundle: unsupported version");
  const std::uint64_t count = get_u64(is);
  std::vector<BundleEntry> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t len = get_u32(is);
    std::string id(len, '\0');
    is.read(id.data(), len);
    if (!is) throw ConfigError("bundle: truncated id");
    out.push_back(BundleEntry{std::move(id), read_snapshot(is)});
  }
  return out;
}

}  // namespace nsv
