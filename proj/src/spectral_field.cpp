#include "nsv/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "nsv/errors.hpp"

namespace nsv {

SpectralField::SpectralField(Grid grid)
    : grid_(std::move(grid)), coeffs_(grid_.num_coeffs(), Complex{0.0, 0.0}) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.num_coeffs())
    throw ConfigError("SpectralField: coefficient count does not match grid");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField::axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField lerp(const SpectralField& a, const SpectralField& b, double w) {
  require_same_grid(a.grid(), b.grid(), "lerp");
  std::vector<Complex> out(a.size());
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * ca[i] + w * cb[i];
  return SpectralField(a.grid(), std::move(out));
}

kernels::ModeLayout layout_of(const Grid& grid) {
  return kernels::ModeLayout{grid.k2_table(), grid.kvec_table(), grid.dim()};
}

double divergence_residual(const SpectralField& u) {
  const Grid& g = u.grid();
  double worst = 0.0;
  double scale = 1.0;
  for (std::size_t m = 0; m < g.num_modes(); ++m) {
    const auto& k = g.wavevector(m);
    Complex dot = 0.0;
    double mag = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
      dot += k[d] * u.coeff(m, d);
      mag += std::norm(u.coeff(m, d));
    }
    worst = std::max(worst, std::abs(dot));
    scale = std::max(scale, std::sqrt(g.k2(m) * mag));
  }
  return worst / scale;
}

double conjugate_symmetry_residual(const SpectralField& u) {
  const Grid& g = u.grid();
  double worst = 0.0;
  for (std::size_t m = 0; m < g.num_modes(); ++m) {
    const std::size_t c = g.conj_index(m);
    for (int d = 0; d < g.dim(); ++d)
      worst = std::max(worst, std::abs(u.coeff(c, d) - std::conj(u.coeff(m, d))));
  }
  for (int d = 0; d < g.dim(); ++d) worst = std::max(worst, std::abs(u.coeff(g.zero_mode(), d)));
  return worst;
}

void enforce_conjugate_symmetry(std::span<Complex> coeffs, const Grid& g) {
  const std::size_t dim = static_cast<std::size_t>(g.dim());
  const std::size_t z = g.zero_mode();
  for (std::size_t m = 0; m < z; ++m) {
    const std::size_t c = g.conj_index(m);
    for (std::size_t d = 0; d < dim; ++d) {
      const Complex a = coeffs[m * dim + d];
      const Complex b = coeffs[c * dim + d];
      const Complex s = 0.5 * (a + std::conj(b));
      coeffs[m * dim + d] = s;
      coeffs[c * dim + d] = std::conj(s);
    }
  }
  for (std::size_t d = 0; d < dim; ++d) coeffs[z * dim + d] = 0.0;
}

}  // namespace nsv
