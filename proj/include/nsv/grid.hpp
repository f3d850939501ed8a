#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace nsv {

using IntVec = std::array<int, 3>;
using RealVec = std::array<double, 3>;

/// Periodic box discretisation. Fields are stored on the retained lattice
/// |m_j| <= kmax with kmax = (n - 1) / 3, which makes every quadratic product
/// alias-free on the n-point transform grid (3 kmax < n).
///
/// Retained modes are ordered lexicographically in (m_1, ..., m_dim), each
/// running from -kmax to kmax, m_1 slowest. The mode -m of index i is
/// num_modes() - 1 - i and the zero mode sits in the middle.
class Grid {
 public:
  Grid(int dim, int n, double box_length = 2.0 * std::numbers::pi);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double box_length() const { return box_length_; }
  int kmax() const { return kmax_; }
  int side() const { return 2 * kmax_ + 1; }

  std::size_t num_modes() const { return num_modes_; }
  std::size_t num_coeffs() const { return num_modes_ * static_cast<std::size_t>(dim_); }
  std::size_t num_points() const { return num_points_; }
  std::size_t zero_mode() const { return (num_modes_ - 1) / 2; }

  /// Fundamental wavenumber 2 pi / L.
  double k0() const { return k0_; }
  /// Smallest nonzero eigenvalue of the Stokes operator on mean-free fields.
  double lambda1() const { return k0_ * k0_; }

  IntVec mode(std::size_t idx) const { return tables_->modes[idx]; }
  const RealVec& wavevector(std::size_t idx) const { return tables_->wavevectors[idx]; }
  double k2(std::size_t idx) const { return tables_->k2[idx]; }
  const std::vector<double>& k2_table() const { return tables_->k2; }
  /// Wavevectors flattened as 3 doubles per mode (unused components are 0).
  const std::vector<double>& kvec_table() const { return tables_->kvec_flat; }
  std::size_t conj_index(std::size_t idx) const { return num_modes_ - 1 - idx; }
  /// Linear index of the mode on the n^dim transform grid (FFT ordering).
  std::size_t transform_index(std::size_t idx) const { return tables_->transform_index[idx]; }

  /// Index of integer wavevector m, or num_modes() if m is not retained.
  std::size_t index_of(const IntVec& m) const;
  bool is_retained(const IntVec& m) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && box_length_ == o.box_length_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  struct Tables {
    std::vector<IntVec> modes;
    std::vector<RealVec> wavevectors;
    std::vector<double> k2;
    std::vector<double> kvec_flat;
    std::vector<std::size_t> transform_index;
  };

  int dim_;
  int n_;
  double box_length_;
  int kmax_;
  double k0_;
  std::size_t num_modes_;
  std::size_t num_points_;
  std::shared_ptr<const Tables> tables_;
};

/// Throws ConfigError unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace nsv
