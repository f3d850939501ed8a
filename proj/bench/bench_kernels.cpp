// Serial reference vs OpenMP kernels on 2D grids.
#include <benchmark/benchmark.h>

#include <vector>

#include "nsv/grid.hpp"
#include "nsv/kernels.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "nsv/spectral_field.hpp"

namespace {

using namespace nsv;

struct Fixture {
  Grid grid;
  SpectralField a, b;
  std::vector<Complex> out;
  explicit Fixture(int n)
      : grid(2, n, 6.283185307179586), a(random_field(grid, 1)), b(random_field(grid, 2)),
        out(a.coeffs().size()) {}
};

template <bool Omp>
void BM_cnab2(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const auto lay = layout_of(f.grid);
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::imex_cnab2(lay, f.a.coeffs(), f.b.coeffs(), f.a.coeffs(), f.out, 1.0, 1.0, 1e-3);
    else kernels::serial::imex_cnab2(lay, f.a.coeffs(), f.b.coeffs(), f.a.coeffs(), f.out, 1.0, 1.0, 1e-3);
    benchmark::DoNotOptimize(f.out.data());
  }
}

template <bool Omp>
void BM_norm(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const auto lay = layout_of(f.grid);
  for (auto _ : st) {
    double v = Omp ? kernels::omp::weighted_norm_sq(lay, f.a.coeffs(), 1)
                   : kernels::serial::weighted_norm_sq(lay, f.a.coeffs(), 1);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Omp>
void BM_leray(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  const auto lay = layout_of(f.grid);
  std::vector<Complex> c(f.a.coeffs().begin(), f.a.coeffs().end());
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::leray(lay, c);
    else kernels::serial::leray(lay, c);
    benchmark::DoNotOptimize(c.data());
  }
}

template <bool Omp>
void BM_convect(benchmark::State& st) {
  const std::size_t np = static_cast<std::size_t>(st.range(0) * st.range(0));
  std::vector<Complex> u(2 * np, Complex(0.3, 0.0)), g(4 * np, Complex(-0.7, 0.0)), o(2 * np);
  for (auto _ : st) {
    if constexpr (Omp) kernels::omp::convect_pointwise(2, np, u, g, o);
    else kernels::serial::convect_pointwise(2, np, u, g, o);
    benchmark::DoNotOptimize(o.data());
  }
}

void BM_convection_full(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    std::vector<Complex> c = convection(f.a, f.b);
    benchmark::DoNotOptimize(c.data());
  }
}

}  // namespace

BENCHMARK(BM_cnab2<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_cnab2<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_norm<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_norm<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_leray<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_leray<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_convect<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_convect<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_convection_full)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
