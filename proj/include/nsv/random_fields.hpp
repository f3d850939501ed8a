#pragma once

#include <cstdint>
#include <vector>

#include "nsv/spectral_field.hpp"

namespace nsv {

/// Random valid field: Gaussian coefficients with envelope (1 + |k|^2)^(-decay/2),
/// conjugate-symmetrised and projected. If target_v_norm > 0 the result is
/// rescaled to that V norm.
SpectralField random_field(const Grid& grid, std::uint64_t seed, double decay = 1.0,
                           double target_v_norm = 0.0);

/// Random raw coefficients (conjugate-symmetric, mean-free, not projected).
std::vector<Complex> random_raw(const Grid& grid, std::uint64_t seed, double decay = 1.0);

/// Unidirectional shear u = (amplitude cos(q k0 y), 0[, 0]).
SpectralField shear_field(const Grid& grid, double amplitude, int wavenumber = 1);

/// Raw gradient field i k phi_k of a random scalar potential.
std::vector<Complex> random_gradient(const Grid& grid, std::uint64_t seed);

}  // namespace nsv
