#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nsv/spectral_field.hpp"

namespace nsv {

/// Function spaces with the norms used throughout: H (plain l2 of the
/// coefficients), V (weight |k|), DA (weight |k|^2), Vdual (weight 1/|k|).
/// The mean mode is excluded in all four.
enum class Space { H, V, DA, Vdual };

const char* space_name(Space s);

/// Divergence-free, mean-free part of a raw coefficient vector.
SpectralField leray_project(std::vector<Complex> raw, const Grid& grid);
SpectralField leray_project(const SpectralField& u);

/// (Au)_k = |k|^2 u_k.
SpectralField apply_stokes(const SpectralField& u);

/// Squared norm and norm in the given space.
double norm_sq(const SpectralField& u, Space s);
double norm(const SpectralField& u, Space s);
/// Real inner product sum_k w(k) Re(a_k . conj(b_k)) with the weight of `s`.
double inner(const SpectralField& a, const SpectralField& b, Space s);

/// Dealiased convection (u . grad) v as raw coefficients on u's grid, not
/// projected. Conjugate symmetry is enforced on the result.
std::vector<Complex> convection(const SpectralField& u, const SpectralField& v);

/// b(u, v, w) = integral of u_i (d_i v_j) w_j, normalised by the box volume.
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// B(u) = P[(u . grad) u].
SpectralField nonlinear_B(const SpectralField& u);

/// Apply a scalar map to every velocity component in physical space, then
/// truncate back to the retained lattice and project. Used for the pointwise
/// map of the delay term.
SpectralField apply_pointwise(const SpectralField& u, const std::function<double(double)>& fn);

/// Physical-space samples of component `comp` on the n^dim transform grid.
std::vector<double> physical_component(const SpectralField& u, int comp);

}  // namespace nsv
