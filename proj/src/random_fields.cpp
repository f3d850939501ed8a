#include "nsv/random_fields.hpp"

#include <cmath>
#include <random>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

std::vector<Complex> random_raw(const Grid& g, std::uint64_t seed, double decay) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> raw(g.num_coeffs(), Complex{0.0, 0.0});
  const std::size_t dim = static_cast<std::size_t>(g.dim());
  // Draw the upper half of the lattice and mirror it.
  for (std::size_t m = g.zero_mode() + 1; m < g.num_modes(); ++m) {
    const double env = std::pow(1.0 + g.k2(m), -0.5 * decay);
    const std::size_t c = g.conj_index(m);
    for (std::size_t d = 0; d < dim; ++d) {
      const double re = normal(rng), im = normal(rng);
      raw[m * dim + d] = env * Complex{re, im};
      raw[c * dim + d] = std::conj(raw[m * dim + d]);
    }
  }
  return raw;
}

SpectralField random_field(const Grid& g, std::uint64_t seed, double decay, double target_v_norm) {
  SpectralField u = leray_project(random_raw(g, seed, decay), g);
  if (target_v_norm > 0.0) {
    const double n = norm(u, Space::V);
    if (n > 0.0) u *= target_v_norm / n;
  }
  return u;
}

SpectralField shear_field(const Grid& g, double amplitude, int q) {
  if (q < 1 || q > g.kmax()) throw ConfigError("shear_field: wavenumber not retained");
  SpectralField u(g);
  IntVec plus{0, q, 0}, minus{0, -q, 0};
  u.coeff(g.index_of(plus), 0) = 0.5 * amplitude;
  u.coeff(g.index_of(minus), 0) = 0.5 * amplitude;
  return u;
}

std::vector<Complex> random_gradient(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t dim = static_cast<std::size_t>(g.dim());
  std::vector<Complex> raw(g.num_coeffs(), Complex{0.0, 0.0});
  for (std::size_t m = g.zero_mode() + 1; m < g.num_modes(); ++m) {
    const Complex phi{normal(rng), normal(rng)};
    const std::size_t c = g.conj_index(m);
    for (std::size_t d = 0; d < dim; ++d) {
      raw[m * dim + d] = Complex{0.0, g.wavevector(m)[d]} * phi;
      raw[c * dim + d] = std::conj(raw[m * dim + d]);
    }
  }
  return raw;
}

}  // namespace nsv
