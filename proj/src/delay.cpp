#include "nsv/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

const char* delay_kind_name(DelayKind k) {
  switch (k) {
    case DelayKind::Discrete: return "discrete";
    case DelayKind::Variable: return "variable";
    case DelayKind::Distributed: return "distributed";
  }
  return "?";
}

const char* pointwise_map_name(PointwiseMap m) {
  return m == PointwiseMap::Tanh ? "tanh" : "identity";
}

double DelaySpec::kernel_mass() const {
  if (kind != DelayKind::Distributed) return 1.0;
  return std::accumulate(kernel.begin(), kernel.end(), 0.0);
}

double DelaySpec::shift_jacobian() const {
  if (kind != DelayKind::Variable) return 1.0;
  return 1.0 / (1.0 - std::abs(tau1 * omega));
}

void DelaySpec::validate(double dt) const {
  if (!(h > 0.0)) throw ConfigError("delay: h must be positive");
  if (!std::isfinite(gain)) throw ConfigError("delay: gain must be finite");
  const double steps = h / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw ConfigError("delay: dt must divide h");
  if (kind == DelayKind::Variable) {
    if (tau0 - std::abs(tau1) < 0.0 || tau0 + std::abs(tau1) > h)
      throw ConfigError("delay: tau range must lie in [0, h]");
    if (std::abs(tau1 * omega) >= 1.0) throw ConfigError("delay: need |tau'| < 1");
  }
  if (kind == DelayKind::Distributed) {
    if (kernel.size() != static_cast<std::size_t>(std::llround(steps)) + 1)
      throw ConfigError("delay: kernel needs one weight per history slot");
    for (double w : kernel)
      if (!(w >= 0.0)) throw ConfigError("delay: kernel weights must be nonnegative");
  }
}

std::vector<double> kernel_from_samples(double h, const std::vector<double>& density) {
  if (density.size() < 2) throw ConfigError("delay: kernel needs at least two samples");
  const double dt = h / static_cast<double>(density.size() - 1);
  std::vector<double> w(density.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double end = (j == 0 || j + 1 == w.size()) ? 0.5 : 1.0;
    w[j] = end * dt * density[j];
  }
  return w;
}

std::vector<double> kernel_from_density(double h, int nh, double (*mu)(double)) {
  std::vector<double> d(static_cast<std::size_t>(nh) + 1);
  for (int j = 0; j <= nh; ++j) d[static_cast<std::size_t>(j)] = mu(-h + h * j / nh);
  return kernel_from_samples(h, d);
}

std::vector<double> point_mass_kernel(int nh) {
  std::vector<double> w(static_cast<std::size_t>(nh) + 1, 0.0);
  w[0] = 1.0;
  return w;
}

namespace {

SpectralField apply_map(PointwiseMap m, const SpectralField& u) {
  if (m == PointwiseMap::Identity) return u;
  return apply_pointwise(u, [](double x) { return std::tanh(x); });
}

}  // namespace

SpectralField delay_g(const DelaySpec& spec, double t, const HistorySegment& hist) {
  const Grid& g = hist.newest()->grid();
  if (spec.gain == 0.0) return SpectralField(g);
  if (std::abs(hist.h() - spec.h) > 1e-9 * spec.h)
    throw ConfigError("delay_g: history horizon differs from delay h");

  SpectralField out(g);
  switch (spec.kind) {
    case DelayKind::Discrete:
      out = apply_map(spec.map, *hist.oldest());
      break;
    case DelayKind::Variable: {
      const double tau = spec.tau(t);
      if (!(tau >= 0.0 && tau <= spec.h)) throw DomainError("delay_g: tau(t) outside [0, h]");
      out = apply_map(spec.map, history_eval(hist, -tau));
      break;
    }
    case DelayKind::Distributed: {
      if (spec.kernel.size() != hist.size())
        throw ConfigError("delay_g: kernel size differs from history slot count");
      if (spec.map == PointwiseMap::Identity) {
        for (std::size_t j = 0; j < hist.size(); ++j)
          if (spec.kernel[j] != 0.0) out.axpy(spec.kernel[j], *hist.slot(j));
      } else {
        for (std::size_t j = 0; j < hist.size(); ++j)
          if (spec.kernel[j] != 0.0) out.axpy(spec.kernel[j], apply_map(spec.map, *hist.slot(j)));
      }
      break;
    }
  }
  out *= spec.gain;
  return leray_project(out);
}

double lipschitz_bound(const DelaySpec& spec, double lambda1) {
  const double poincare = std::max(1.0, 1.0 / std::sqrt(lambda1));
  return std::abs(spec.gain) * spec.map_lipschitz() * spec.kernel_mass() * poincare;
}

}  // namespace nsv
