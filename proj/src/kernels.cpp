#include "nsv/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace nsv::kernels {

namespace {

// |k|^(2p) with the convention that the zero mode carries weight 0 for p != 0.
inline double k2_weight(double k2, int power) {
  if (power == 0) return 1.0;
  if (k2 == 0.0) return 0.0;
  switch (power) {
    case 1: return k2;
    case 2: return k2 * k2;
    case -1: return 1.0 / k2;
    default: return std::pow(k2, power);
  }
}

inline void leray_mode(const ModeLayout& l, std::size_t i, Complex* c) {
  const double kk = l.k2[i];
  if (kk == 0.0) {
    for (int d = 0; d < l.dim; ++d) c[d] = 0.0;
    return;
  }
  const double* k = &l.kvec[3 * i];
  Complex dot = 0.0;
  for (int d = 0; d < l.dim; ++d) dot += k[d] * c[d];
  const Complex s = dot / kk;
  for (int d = 0; d < l.dim; ++d) c[d] -= k[d] * s;
}

inline double mode_norm_sq(const Complex* c, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += std::norm(c[d]);
  return s;
}

inline double mode_inner(const Complex* a, const Complex* b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += a[d].real() * b[d].real() + a[d].imag() * b[d].imag();
  return s;
}

}  // namespace

// ---------------------------------------------------------------- serial

namespace serial {

void leray(const ModeLayout& l, std::span<Complex> coeffs) {
  const std::size_t nm = l.k2.size();
  for (std::size_t i = 0; i < nm; ++i) leray_mode(l, i, &coeffs[i * l.dim]);
}

void scale_by_k2_power(const ModeLayout& l, std::span<const Complex> in, std::span<Complex> out,
                       int power) {
  const std::size_t nm = l.k2.size();
  for (std::size_t i = 0; i < nm; ++i) {
    const double w = k2_weight(l.k2[i], power);
    for (int d = 0; d < l.dim; ++d) out[i * l.dim + d] = w * in[i * l.dim + d];
  }
}

double weighted_norm_sq(const ModeLayout& l, std::span<const Complex> coeffs, int p) {
  double s = 0.0;
  const std::size_t nm = l.k2.size();
  for (std::size_t i = 0; i < nm; ++i)
    s += k2_weight(l.k2[i], p) * mode_norm_sq(&coeffs[i * l.dim], l.dim);
  return s;
}

double weighted_inner(const ModeLayout& l, std::span<const Complex> a, std::span<const Complex> b,
                      int p) {
  double s = 0.0;
  const std::size_t nm = l.k2.size();
  for (std::size_t i = 0; i < nm; ++i)
    s += k2_weight(l.k2[i], p) * mode_inner(&a[i * l.dim], &b[i * l.dim], l.dim);
  return s;
}

void imex_euler(const ModeLayout& l, std::span<const Complex> u, std::span<const Complex> e,
                std::span<Complex> out, double alpha2, double nu, double dt) {
  const std::size_t nm = l.k2.size();
  for (std::size_t i = 0; i < nm; ++i) {
    const double mass = 1.0 + alpha2 * l.k2[i];
    const double inv = 1.0 / (mass + dt * nu * l.k2[i]);
    for (int d = 0; d < l.dim; ++d) {
      const std::size_t j = i * l.dim + d;
      out[j] = (mass * u[j] + dt * e[j]) * inv;
    }
  }
}

void imex_cnab2(const ModeLayout& l, std::span<const Complex> u, std::span<const Complex> e,
                std::span<const Complex> e_prev, std::span<Complex> out, double alpha2, double nu,
                double dt) {
  const std::size_t nm = l.k2.size();
  for (std::size_t i = 0; i < nm; ++i) {
    const double mass = 1.0 + alpha2 * l.k2[i];
    const double half = 0.5 * dt * nu * l.k2[i];
    const double inv = 1.0 / (mass + half);
    for (int d = 0; d < l.dim; ++d) {
      const std::size_t j = i * l.dim + d;
      out[j] = ((mass - half) * u[j] + dt * (1.5 * e[j] - 0.5 * e_prev[j])) * inv;
    }
  }
}

void convect_pointwise(int dim, std::size_t np, std::span<const Complex> u,
                       std::span<const Complex> grad, std::span<Complex> out) {
  for (int j = 0; j < dim; ++j) {
    for (std::size_t x = 0; x < np; ++x) {
      double s = 0.0;
      for (int i = 0; i < dim; ++i)
        s += u[i * np + x].real() * grad[(i * dim + j) * np + x].real();
      out[j * np + x] = s;
    }
  }
}

}  // namespace serial

// ---------------------------------------------------------------- omp

namespace omp {

namespace {

template <class PerMode>
double chunked_reduce(std::size_t nm, PerMode&& per_mode) {
  const std::size_t nchunks = (nm + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(nchunks, 0.0);
  const long long nc = static_cast<long long>(nchunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nc; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
    const std::size_t hi = std::min(nm, lo + kReduceChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += per_mode(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

void leray(const ModeLayout& l, std::span<Complex> coeffs) {
  const long long nm = static_cast<long long>(l.k2.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < nm; ++i)
    leray_mode(l, static_cast<std::size_t>(i), &coeffs[static_cast<std::size_t>(i) * l.dim]);
}

void scale_by_k2_power(const ModeLayout& l, std::span<const Complex> in, std::span<Complex> out,
                       int power) {
  const long long nm = static_cast<long long>(l.k2.size());
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < nm; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double w = k2_weight(l.k2[i], power);
    for (int d = 0; d < l.dim; ++d) out[i * l.dim + d] = w * in[i * l.dim + d];
  }
}

double weighted_norm_sq(const ModeLayout& l, std::span<const Complex> coeffs, int p) {
  return chunked_reduce(l.k2.size(), [&](std::size_t i) {
    return k2_weight(l.k2[i], p) * mode_norm_sq(&coeffs[i * l.dim], l.dim);
  });
}

double weighted_inner(const ModeLayout& l, std::span<const Complex> a, std::span<const Complex> b,
                      int p) {
  return chunked_reduce(l.k2.size(), [&](std::size_t i) {
    return k2_weight(l.k2[i], p) * mode_inner(&a[i * l.dim], &b[i * l.dim], l.dim);
  });
}

void imex_euler(const ModeLayout& l, std::span<const Complex> u, std::span<const Complex> e,
                std::span<Complex> out, double alpha2, double nu, double dt) {
  const long long nm = static_cast<long long>(l.k2.size());
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < nm; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double mass = 1.0 + alpha2 * l.k2[i];
    const double inv = 1.0 / (mass + dt * nu * l.k2[i]);
    for (int d = 0; d < l.dim; ++d) {
      const std::size_t j = i * l.dim + d;
      out[j] = (mass * u[j] + dt * e[j]) * inv;
    }
  }
}

void imex_cnab2(const ModeLayout& l, std::span<const Complex> u, std::span<const Complex> e,
                std::span<const Complex> e_prev, std::span<Complex> out, double alpha2, double nu,
                double dt) {
  const long long nm = static_cast<long long>(l.k2.size());
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < nm; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double mass = 1.0 + alpha2 * l.k2[i];
    const double half = 0.5 * dt * nu * l.k2[i];
    const double inv = 1.0 / (mass + half);
    for (int d = 0; d < l.dim; ++d) {
      const std::size_t j = i * l.dim + d;
      out[j] = ((mass - half) * u[j] + dt * (1.5 * e[j] - 0.5 * e_prev[j])) * inv;
    }
  }
}

void convect_pointwise(int dim, std::size_t np, std::span<const Complex> u,
                       std::span<const Complex> grad, std::span<Complex> out) {
  const long long n = static_cast<long long>(np);
  for (int j = 0; j < dim; ++j) {
#pragma omp parallel for schedule(static)
    for (long long xx = 0; xx < n; ++xx) {
      const std::size_t x = static_cast<std::size_t>(xx);
      double s = 0.0;
      for (int i = 0; i < dim; ++i)
        s += u[i * np + x].real() * grad[(i * dim + j) * np + x].real();
      out[j * np + x] = s;
    }
  }
}

}  // namespace omp

}  // namespace nsv::kernels
