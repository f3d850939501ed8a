#include <doctest.h>

#include <cmath>
#include <numbers>

#include <omp.h>

#include "nsv/embedding.hpp"
#include "nsv/errors.hpp"
#include "nsv/fft.hpp"
#include "nsv/kernels.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "oracles/oracles.hpp"

using namespace nsv;

namespace {
double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST_CASE("grid lattice layout") {
  for (int dim : {2, 3}) {
    Grid g(dim, 8);
    CHECK(g.kmax() == 2);
    CHECK(g.num_modes() == static_cast<std::size_t>(std::pow(5, dim)));
    CHECK(g.k2(g.zero_mode()) == 0.0);
    for (std::size_t i = 0; i < g.num_modes(); ++i) {
      const IntVec m = g.mode(i), mc = g.mode(g.conj_index(i));
      for (int c = 0; c < dim; ++c) CHECK(mc[c] == -m[c]);
      CHECK(g.index_of(m) == i);
    }
    // m_1 slowest
    CHECK(g.mode(0)[0] == -2);
    CHECK(g.mode(1)[0] == -2);
    CHECK(g.mode(g.num_modes() - 1)[dim - 1] == 2);
  }
  CHECK_THROWS_AS(Grid(2, 5), ConfigError);
  Grid big(2, 8, 4.0 * std::numbers::pi);
  CHECK(big.lambda1() == doctest::Approx(0.25));
}

TEST_CASE("random fields are valid velocity fields") {
  for (int dim : {2, 3}) {
    Grid g(dim, 8);
    SpectralField u = random_field(g, 7, 1.0, 2.5);
    CHECK(divergence_residual(u) < 1e-13);
    CHECK(conjugate_symmetry_residual(u) == 0.0);
    CHECK(norm(u, Space::V) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(std::abs(u.coeff(g.zero_mode(), 0)) == 0.0);
    // same seed, same field
    CHECK(random_field(g, 7, 1.0, 2.5) == u);
  }
}

TEST_CASE("leray projection matches the dense per-mode matrix") {
  for (int dim : {2, 3}) {
    Grid g(dim, 8);
    std::vector<Complex> raw = random_raw(g, 3);
    SpectralField p = leray_project(raw, g);
    std::vector<Complex> ref = oracle::leray_dense(raw, g);
    CHECK(max_diff(p.coeffs(), ref) < 1e-14);
    // idempotent, kills gradients
    CHECK(max_diff(leray_project(p).coeffs(), p.coeffs()) < 1e-15);
    SpectralField gp = leray_project(random_gradient(g, 4), g);
    CHECK(gp.max_abs() < 1e-14);
  }
  Grid g(2, 8);
  CHECK_THROWS_AS(leray_project(std::vector<Complex>(3), g), ConfigError);
}

TEST_CASE("norms agree with direct coefficient sums") {
  Grid g(3, 8);
  SpectralField u = random_field(g, 11, 0.5);
  CHECK(norm_sq(u, Space::H) == doctest::Approx(oracle::weighted_sq(u, 0.0)).epsilon(1e-13));
  CHECK(norm_sq(u, Space::V) == doctest::Approx(oracle::weighted_sq(u, 1.0)).epsilon(1e-13));
  CHECK(norm_sq(u, Space::DA) == doctest::Approx(oracle::weighted_sq(u, 2.0)).epsilon(1e-13));
  CHECK(norm_sq(u, Space::Vdual) == doctest::Approx(oracle::weighted_sq(u, -1.0)).epsilon(1e-13));
  // Poincare on the 2 pi box: |u| <= |u|_V
  CHECK(norm(u, Space::H) <= norm(u, Space::V));
  CHECK(inner(u, u, Space::V) == doctest::Approx(norm_sq(u, Space::V)).epsilon(1e-14));
  SpectralField au = apply_stokes(u);
  CHECK(inner(au, u, Space::H) == doctest::Approx(norm_sq(u, Space::V)).epsilon(1e-13));
}

TEST_CASE("shear mode norms") {
  Grid g(2, 16);
  SpectralField s = shear_field(g, 0.8, 2);
  CHECK(norm_sq(s, Space::H) == doctest::Approx(0.32).epsilon(1e-14));
  CHECK(norm_sq(s, Space::V) == doctest::Approx(0.32 * 4).epsilon(1e-14));
  CHECK(divergence_residual(s) == 0.0);
  // physical values: 0.8 cos(2 y)
  std::vector<double> ux = physical_component(s, 0);
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    const double y = 2 * std::numbers::pi * iy / n;
    CHECK(ux[static_cast<std::size_t>(iy)] == doctest::Approx(0.8 * std::cos(2 * y)).epsilon(1e-12));
  }
}

TEST_CASE("fft round trip on the retained lattice") {
  for (int dim : {2, 3}) {
    Grid g(dim, 8);
    SpectralField u = random_field(g, 2);
    std::vector<Complex> phys(g.num_points()), back(g.num_coeffs());
    for (int c = 0; c < dim; ++c) {
      fft::to_physical(g, u.coeffs().subspan(static_cast<std::size_t>(c)), static_cast<std::size_t>(dim), phys);
      for (const auto& x : phys) CHECK(std::abs(x.imag()) < 1e-13);
      fft::to_spectral(g, phys, std::span<Complex>(back).subspan(static_cast<std::size_t>(c)),
                       static_cast<std::size_t>(dim));
    }
    CHECK(max_diff(back, u.coeffs()) < 1e-14);
  }
}

TEST_CASE("pseudospectral convection equals the dense convolution (n = 4)") {
  for (int dim : {2, 3}) {
    Grid g(dim, 4);
    for (std::uint64_t s = 0; s < 5; ++s) {
      SpectralField u = random_field(g, 100 + s), v = random_field(g, 200 + s);
      std::vector<Complex> ps = convection(u, v);
      std::vector<Complex> dense = oracle::dense_convolution(u, v);
      double scale = 0.0;
      for (const auto& x : dense) scale = std::max(scale, std::abs(x));
      CHECK(max_diff(ps, dense) <= 1e-12 * scale);
    }
  }
  // and on a larger grid where the 2/3 rule matters
  Grid g(2, 8);
  SpectralField u = random_field(g, 5, 0.0), v = random_field(g, 6, 0.0);
  std::vector<Complex> ps = convection(u, v), dense = oracle::dense_convolution(u, v);
  CHECK(max_diff(ps, dense) < 1e-12);
}

TEST_CASE("trilinear form identities on random triples") {
  for (int dim : {2, 3}) {
    Grid g(dim, dim == 2 ? 16 : 8);
    for (std::uint64_t s = 0; s < 20; ++s) {
      SpectralField u = random_field(g, 3 * s + 1), v = random_field(g, 3 * s + 2), w = random_field(g, 3 * s + 3);
      const double scale = norm(u, Space::V) * norm(v, Space::V) * norm(w, Space::V);
      CHECK(std::abs(trilinear_b(u, v, v)) <= 1e-12 * scale);
      CHECK(std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)) <= 1e-12 * scale);
    }
  }
  // B(shear) = 0: a shear flow is a steady Euler solution
  Grid g(2, 16);
  CHECK(nonlinear_B(shear_field(g, 1.0, 1)).max_abs() < 1e-15);
}

TEST_CASE("embedding defaults hold on random samples") {
  for (int dim : {2, 3}) {
    Grid g(dim, 8);
    EmbeddingValidation v = validate_embedding(default_embedding_constants(g, 1.0), g, 1.0, 30, 9);
    INFO(v.describe());
    CHECK(v.all_hold);
  }
  Grid g(2, 8, 4 * std::numbers::pi);
  EmbeddingValidation v = validate_embedding(default_embedding_constants(g, 0.5), g, 0.5, 30, 1);
  INFO(v.describe());
  CHECK(v.all_hold);
}

TEST_CASE("serial and OpenMP kernels agree") {
  Grid g(3, 16);
  const kernels::ModeLayout lay = layout_of(g);
  SpectralField a = random_field(g, 1), b = random_field(g, 2), c = random_field(g, 3);
  const std::size_t nc = g.num_coeffs();
  std::vector<Complex> o1(nc), o2(nc);

  std::vector<Complex> r1 = random_raw(g, 8), r2 = r1;
  kernels::serial::leray(lay, r1);
  kernels::omp::leray(lay, r2);
  CHECK(r1 == r2);

  for (int p : {-1, 0, 1, 2}) {
    kernels::serial::scale_by_k2_power(lay, a.coeffs(), o1, p);
    kernels::omp::scale_by_k2_power(lay, a.coeffs(), o2, p);
    CHECK(o1 == o2);
    const double s1 = kernels::serial::weighted_norm_sq(lay, a.coeffs(), p);
    const double s2 = kernels::omp::weighted_norm_sq(lay, a.coeffs(), p);
    CHECK(s2 == doctest::Approx(s1).epsilon(1e-14));
    const double i1 = kernels::serial::weighted_inner(lay, a.coeffs(), b.coeffs(), p);
    const double i2 = kernels::omp::weighted_inner(lay, a.coeffs(), b.coeffs(), p);
    CHECK(std::abs(i1 - i2) < 1e-14 * (std::abs(i1) + 1.0));
  }
  kernels::serial::imex_euler(lay, a.coeffs(), b.coeffs(), o1, 0.3, 0.7, 1e-2);
  kernels::omp::imex_euler(lay, a.coeffs(), b.coeffs(), o2, 0.3, 0.7, 1e-2);
  CHECK(o1 == o2);
  kernels::serial::imex_cnab2(lay, a.coeffs(), b.coeffs(), c.coeffs(), o1, 0.3, 0.7, 1e-2);
  kernels::omp::imex_cnab2(lay, a.coeffs(), b.coeffs(), c.coeffs(), o2, 0.3, 0.7, 1e-2);
  CHECK(o1 == o2);

  const std::size_t np = 512;
  std::vector<Complex> up(3 * np), gp(9 * np), q1(3 * np), q2(3 * np);
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = std::sin(0.1 * static_cast<double>(i));
  for (std::size_t i = 0; i < gp.size(); ++i) gp[i] = std::cos(0.07 * static_cast<double>(i));
  kernels::serial::convect_pointwise(3, np, up, gp, q1);
  kernels::omp::convect_pointwise(3, np, up, gp, q2);
  CHECK(q1 == q2);
}

TEST_CASE("OpenMP reductions do not depend on the thread count") {
  Grid g(3, 16);
  const kernels::ModeLayout lay = layout_of(g);
  SpectralField a = random_field(g, 4);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = kernels::omp::weighted_norm_sq(lay, a.coeffs(), 1);
  omp_set_num_threads(4);
  const double four = kernels::omp::weighted_norm_sq(lay, a.coeffs(), 1);
  omp_set_num_threads(saved);
  CHECK(one == four);
}
