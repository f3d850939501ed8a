#include "nsv/grid.hpp"

#include <cmath>
#include <string>

#include "nsv/errors.hpp"

namespace nsv {

Grid::Grid(int dim, int n, double box_length)
    : dim_(dim), n_(n), box_length_(box_length) {
  if (dim != 2 && dim != 3) throw ConfigError("grid dim must be 2 or 3");
  if (n < 4 || n % 2 != 0) throw ConfigError("grid n must be even and >= 4");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ConfigError("grid box_length must be positive");

  kmax_ = (n - 1) / 3;
  k0_ = 2.0 * std::numbers::pi / box_length;

  const std::size_t s = static_cast<std::size_t>(side());
  num_modes_ = 1;
  num_points_ = 1;
  for (int d = 0; d < dim; ++d) {
    num_modes_ *= s;
    num_points_ *= static_cast<std::size_t>(n);
  }

  auto t = std::make_shared<Tables>();
  t->modes.resize(num_modes_);
  t->wavevectors.resize(num_modes_);
  t->k2.resize(num_modes_);
  t->kvec_flat.resize(3 * num_modes_);
  t->transform_index.resize(num_modes_);
  for (std::size_t idx = 0; idx < num_modes_; ++idx) {
    IntVec m{0, 0, 0};
    std::size_t rem = idx;
    for (int d = dim - 1; d >= 0; --d) {
      m[d] = static_cast<int>(rem % s) - kmax_;
      rem /= s;
    }
    std::size_t lin = 0;
    RealVec k{0.0, 0.0, 0.0};
    double kk = 0.0;
    for (int d = 0; d < dim; ++d) {
      lin = lin * static_cast<std::size_t>(n) + static_cast<std::size_t>((m[d] + n) % n);
      k[d] = k0_ * m[d];
      kk += k[d] * k[d];
    }
    t->modes[idx] = m;
    t->wavevectors[idx] = k;
    t->k2[idx] = kk;
    for (int d = 0; d < 3; ++d) t->kvec_flat[3 * idx + d] = k[d];
    t->transform_index[idx] = lin;
  }
  tables_ = std::move(t);
}

bool Grid::is_retained(const IntVec& m) const {
  for (int d = 0; d < dim_; ++d)
    if (m[d] < -kmax_ || m[d] > kmax_) return false;
  for (int d = dim_; d < 3; ++d)
    if (m[d] != 0) return false;
  return true;
}

std::size_t Grid::index_of(const IntVec& m) const {
  if (!is_retained(m)) return num_modes_;
  const std::size_t s = static_cast<std::size_t>(side());
  std::size_t idx = 0;
  for (int d = 0; d < dim_; ++d) idx = idx * s + static_cast<std::size_t>(m[d] + kmax_);
  return idx;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw ConfigError(std::string(where) + ": grid mismatch");
}

}  // namespace nsv
