#pragma once

// Data-parallel inner loops of the spectral solver.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing and benchmarking, `omp::` is what the library calls. Map kernels
// give bit-identical results in both versions. Reductions in `omp::` sum
// fixed-size chunks and combine the partial sums in chunk order, so their
// value does not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace nsv {

using Complex = std::complex<double>;

namespace kernels {

inline constexpr std::size_t kReduceChunk = 256;

struct ModeLayout {
  std::span<const double> k2;        // |k|^2 per mode
  std::span<const double> kvec;      // 3 entries per mode
  int dim;
};

namespace serial {
void leray(const ModeLayout& layout, std::span<Complex> coeffs);
void scale_by_k2_power(const ModeLayout& layout, std::span<const Complex> in,
                       std::span<Complex> out, int power);
double weighted_norm_sq(const ModeLayout& layout, std::span<const Complex> coeffs, int k2_power);
double weighted_inner(const ModeLayout& layout, std::span<const Complex> a,
                      std::span<const Complex> b, int k2_power);
void imex_euler(const ModeLayout& layout, std::span<const Complex> u, std::span<const Complex> e,
                std::span<Complex> out, double alpha2, double nu, double dt);
void imex_cnab2(const ModeLayout& layout, std::span<const Complex> u, std::span<const Complex> e,
                std::span<const Complex> e_prev, std::span<Complex> out, double alpha2,
                double nu, double dt);
void convect_pointwise(int dim, std::size_t npoints, std::span<const Complex> u_phys,
                       std::span<const Complex> grad_phys, std::span<Complex> out_phys);
}  // namespace serial

namespace omp {
void leray(const ModeLayout& layout, std::span<Complex> coeffs);
void scale_by_k2_power(const ModeLayout& layout, std::span<const Complex> in,
                       std::span<Complex> out, int power);
double weighted_norm_sq(const ModeLayout& layout, std::span<const Complex> coeffs, int k2_power);
double weighted_inner(const ModeLayout& layout, std::span<const Complex> a,
                      std::span<const Complex> b, int k2_power);
void imex_euler(const ModeLayout& layout, std::span<const Complex> u, std::span<const Complex> e,
                std::span<Complex> out, double alpha2, double nu, double dt);
void imex_cnab2(const ModeLayout& layout, std::span<const Complex> u, std::span<const Complex> e,
                std::span<const Complex> e_prev, std::span<Complex> out, double alpha2,
                double nu, double dt);
void convect_pointwise(int dim, std::size_t npoints, std::span<const Complex> u_phys,
                       std::span<const Complex> grad_phys, std::span<Complex> out_phys);
}  // namespace omp

}  // namespace kernels
}  // namespace nsv
