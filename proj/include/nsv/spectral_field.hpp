#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nsv/grid.hpp"
#include "nsv/kernels.hpp"

namespace nsv {

/// Truncated Fourier representation of a velocity field on a Grid.
///
/// Coefficients are stored for every retained mode, components innermost:
/// coeffs()[mode * dim + comp]. A valid field is mean-free, divergence-free
/// and conjugate-symmetric; the arithmetic below preserves all three, but
/// raw construction does not check them (see leray_project).
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs_mut() { return coeffs_; }
  const std::vector<Complex>& data() const { return coeffs_; }

  Complex coeff(std::size_t mode, int comp) const {
    return coeffs_[mode * static_cast<std::size_t>(grid_.dim()) + static_cast<std::size_t>(comp)];
  }
  Complex& coeff(std::size_t mode, int comp) {
    return coeffs_[mode * static_cast<std::size_t>(grid_.dim()) + static_cast<std::size_t>(comp)];
  }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  /// Largest coefficient modulus.
  double max_abs() const;
  bool all_finite() const;

  bool operator==(const SpectralField& o) const {
    return grid_ == o.grid_ && coeffs_ == o.coeffs_;
  }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Linear interpolation (1 - w) a + w b.
SpectralField lerp(const SpectralField& a, const SpectralField& b, double w);

using FieldPtr = std::shared_ptr<const SpectralField>;

inline FieldPtr make_field_ptr(SpectralField f) {
  return std::make_shared<const SpectralField>(std::move(f));
}

/// Per-mode layout view used by the kernels.
kernels::ModeLayout layout_of(const Grid& grid);

/// max_k |k . u_k| / max(1, max_k |k| |u_k|).
double divergence_residual(const SpectralField& u);
/// max_k |u_{-k} - conj(u_k)|, plus |u_0|.
double conjugate_symmetry_residual(const SpectralField& u);
/// Replace u_k by (u_k + conj(u_{-k})) / 2 and zero the mean mode.
void enforce_conjugate_symmetry(std::span<Complex> coeffs, const Grid& grid);

}  // namespace nsv
