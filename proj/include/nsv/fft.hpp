#pragma once

#include <span>

#include "nsv/grid.hpp"
#include "nsv/kernels.hpp"

namespace nsv::fft {

/// Synthesis of one scalar component: phys(x) = sum_k c_k exp(i k.x) on the
/// n^dim transform grid. `modes` has grid.num_modes() entries (one component),
/// read with stride `stride` starting at `modes[0]`; `phys` has num_points().
void to_physical(const Grid& grid, std::span<const Complex> modes, std::size_t stride,
                 std::span<Complex> phys);

/// Analysis: inverse of to_physical restricted to the retained lattice.
/// Writes num_modes() coefficients with stride `stride`.
void to_spectral(const Grid& grid, std::span<Complex> phys, std::span<Complex> modes,
                 std::size_t stride);

}  // namespace nsv::fft
