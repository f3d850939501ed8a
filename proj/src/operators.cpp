#include "nsv/operators.hpp"

#include <cmath>

#include "nsv/errors.hpp"
#include "nsv/fft.hpp"

namespace nsv {

namespace {

int weight_power(Space s) {
  switch (s) {
    case Space::H: return 0;
    case Space::V: return 1;
    case Space::DA: return 2;
    case Space::Vdual: return -1;
  }
  return 0;
}

// The H inner product must still skip the mean mode, which the kernels
// weight by 1; valid fields have a zero mean so only raw input is affected.
double mean_mode_correction(const SpectralField& a, const SpectralField& b, Space s) {
  if (s != Space::H) return 0.0;
  const Grid& g = a.grid();
  const std::size_t z = g.zero_mode();
  double c = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const Complex x = a.coeff(z, d), y = b.coeff(z, d);
    c += x.real() * y.real() + x.imag() * y.imag();
  }
  return c;
}

}  // namespace

const char* space_name(Space s) {
  switch (s) {
    case Space::H: return "H";
    case Space::V: return "V";
    case Space::DA: return "DA";
    case Space::Vdual: return "Vdual";
  }
  return "?";
}

SpectralField leray_project(std::vector<Complex> raw, const Grid& grid) {
  if (raw.size() != grid.num_coeffs()) throw ConfigError("leray_project: grid mismatch");
  kernels::omp::leray(layout_of(grid), raw);
  return SpectralField(grid, std::move(raw));
}

SpectralField leray_project(const SpectralField& u) {
  return leray_project(u.data(), u.grid());
}

SpectralField apply_stokes(const SpectralField& u) {
  std::vector<Complex> out(u.size());
  kernels::omp::scale_by_k2_power(layout_of(u.grid()), u.coeffs(), out, 1);
  return SpectralField(u.grid(), std::move(out));
}

double norm_sq(const SpectralField& u, Space s) {
  return inner(u, u, s);
}

double norm(const SpectralField& u, Space s) { return std::sqrt(norm_sq(u, s)); }

double inner(const SpectralField& a, const SpectralField& b, Space s) {
  require_same_grid(a.grid(), b.grid(), "inner");
  const double raw =
      kernels::omp::weighted_inner(layout_of(a.grid()), a.coeffs(), b.coeffs(), weight_power(s));
  return raw - mean_mode_correction(a, b, s);
}

std::vector<Complex> convection(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "convection");
  const Grid& g = u.grid();
  const int dim = g.dim();
  const std::size_t np = g.num_points();
  const std::size_t nm = g.num_modes();
  const std::size_t sd = static_cast<std::size_t>(dim);

  std::vector<Complex> u_phys(sd * np), grad_phys(sd * sd * np), out_phys(sd * np);
  std::vector<Complex> tmp(nm);
  for (int i = 0; i < dim; ++i) {
    fft::to_physical(g, u.coeffs().subspan(static_cast<std::size_t>(i)), sd,
                     std::span<Complex>(u_phys).subspan(static_cast<std::size_t>(i) * np, np));
  }
  // grad_phys[(i * dim + j)] = d_i v_j
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (std::size_t m = 0; m < nm; ++m)
        tmp[m] = Complex{0.0, g.wavevector(m)[i]} * v.coeff(m, j);
      const std::size_t slot = static_cast<std::size_t>(i * dim + j);
      fft::to_physical(g, tmp, 1, std::span<Complex>(grad_phys).subspan(slot * np, np));
    }
  }
  kernels::omp::convect_pointwise(dim, np, u_phys, grad_phys, out_phys);

  std::vector<Complex> out(g.num_coeffs());
  for (int j = 0; j < dim; ++j) {
    fft::to_spectral(g, std::span<Complex>(out_phys).subspan(static_cast<std::size_t>(j) * np, np),
                     std::span<Complex>(out).subspan(static_cast<std::size_t>(j)), sd);
  }
  enforce_conjugate_symmetry(out, g);
  return out;
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  require_same_grid(u.grid(), w.grid(), "trilinear_b");
  const std::vector<Complex> n = convection(u, v);
  return kernels::omp::weighted_inner(layout_of(u.grid()), n, w.coeffs(), 0);
}

SpectralField nonlinear_B(const SpectralField& u) {
  return leray_project(convection(u, u), u.grid());
}

SpectralField apply_pointwise(const SpectralField& u, const std::function<double(double)>& fn) {
  const Grid& g = u.grid();
  const std::size_t np = g.num_points();
  const std::size_t sd = static_cast<std::size_t>(g.dim());
  std::vector<Complex> phys(np);
  std::vector<Complex> out(g.num_coeffs());
  for (std::size_t c = 0; c < sd; ++c) {
    fft::to_physical(g, u.coeffs().subspan(c), sd, phys);
    for (auto& x : phys) x = fn(x.real());
    fft::to_spectral(g, phys, std::span<Complex>(out).subspan(c), sd);
  }
  enforce_conjugate_symmetry(out, g);
  return leray_project(std::move(out), g);
}

std::vector<double> physical_component(const SpectralField& u, int comp) {
  const Grid& g = u.grid();
  std::vector<Complex> phys(g.num_points());
  fft::to_physical(g, u.coeffs().subspan(static_cast<std::size_t>(comp)),
                   static_cast<std::size_t>(g.dim()), phys);
  std::vector<double> out(phys.size());
  for (std::size_t i = 0; i < phys.size(); ++i) out[i] = phys[i].real();
  return out;
}

}  // namespace nsv
