#include "nsv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace nsv::fft {

namespace {

struct PlanPair {
  fftw_plan backward = nullptr;
  fftw_plan forward = nullptr;
};

// Plans are created once per (dim, n) and never destroyed; fftw_execute_dft
// on an existing plan is thread-safe, planning is not.
std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair> g_plans;

const PlanPair& plans_for(const Grid& g) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(g.dim(), g.n());
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;

  int dims[3] = {g.n(), g.n(), g.n()};
  std::vector<Complex> a(g.num_points()), b(g.num_points());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.backward = fftw_plan_dft(g.dim(), dims, pa, pb, FFTW_BACKWARD, flags);
  p.forward = fftw_plan_dft(g.dim(), dims, pa, pb, FFTW_FORWARD, flags);
  return g_plans.emplace(key, p).first->second;
}

}  // namespace

void to_physical(const Grid& g, std::span<const Complex> modes, std::size_t stride,
                 std::span<Complex> phys) {
  const PlanPair& p = plans_for(g);
  std::vector<Complex> spec(g.num_points(), Complex{0.0, 0.0});
  for (std::size_t m = 0; m < g.num_modes(); ++m) spec[g.transform_index(m)] = modes[m * stride];
  fftw_execute_dft(p.backward, reinterpret_cast<fftw_complex*>(spec.data()),
                   reinterpret_cast<fftw_complex*>(phys.data()));
}

void to_spectral(const Grid& g, std::span<Complex> phys, std::span<Complex> modes,
                 std::size_t stride) {
  const PlanPair& p = plans_for(g);
  std::vector<Complex> spec(g.num_points());
  fftw_execute_dft(p.forward, reinterpret_cast<fftw_complex*>(phys.data()),
                   reinterpret_cast<fftw_complex*>(spec.data()));
  const double inv = 1.0 / static_cast<double>(g.num_points());
  for (std::size_t m = 0; m < g.num_modes(); ++m)
    modes[m * stride] = spec[g.transform_index(m)] * inv;
}

}  // namespace nsv::fft
