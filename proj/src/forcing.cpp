#include "nsv/forcing.hpp"

#include <cmath>

#include "nsv/errors.hpp"

namespace nsv {

const char* forcing_kind_name(ForcingKind k) {
  switch (k) {
    case ForcingKind::Zero: return "zero";
    case ForcingKind::Constant: return "constant";
    case ForcingKind::Periodic: return "periodic";
    case ForcingKind::ExpWindowed: return "exp_windowed";
  }
  return "?";
}

double ForcingSpec::profile(double t) const {
  switch (kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::Constant: return 1.0;
    case ForcingKind::Periodic: return c0 + a1 * std::cos(omega * t);
    case ForcingKind::ExpWindowed: return std::exp(-delta * std::abs(t));
  }
  return 0.0;
}

double ForcingSpec::profile_sup() const {
  switch (kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::Constant: return 1.0;
    case ForcingKind::Periodic: return std::abs(c0) + std::abs(a1);
    case ForcingKind::ExpWindowed: return 1.0;
  }
  return 0.0;
}

SpectralField ForcingSpec::at(double t, const Grid& grid) const {
  if (kind == ForcingKind::Zero || !amplitude) return SpectralField(grid);
  require_same_grid(amplitude->grid(), grid, "forcing");
  SpectralField f = *amplitude;
  f *= profile(t);
  return f;
}

bool ForcingSpec::integrable(double sigma) const {
  if (kind == ForcingKind::Zero || !amplitude) return true;
  return sigma > 0.0;  // every profile is bounded; exp_windowed would also allow sigma > -2 delta
}

double ForcingSpec::weighted_profile_integral(double sigma, double t) const {
  if (kind == ForcingKind::Zero || !amplitude) return 0.0;
  if (!(sigma > 0.0)) return INFINITY;
  switch (kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::Constant: return 1.0 / sigma;
    case ForcingKind::Periodic: {
      const double w = omega;
      const double s2 = sigma * sigma;
      double v = (c0 * c0 + 0.5 * a1 * a1) / sigma;
      v += 2.0 * c0 * a1 * (sigma * std::cos(w * t) + w * std::sin(w * t)) / (s2 + w * w);
      v += 0.5 * a1 * a1 * (sigma * std::cos(2.0 * w * t) + 2.0 * w * std::sin(2.0 * w * t)) /
           (s2 + 4.0 * w * w);
      return v;
    }
    case ForcingKind::ExpWindowed: {
      const double d2 = 2.0 * delta;
      if (t <= 0.0) return std::exp(d2 * t) / (sigma + d2);
      // part from (-inf, 0] plus part from (0, t]
      const double head = std::exp(-sigma * t) / (sigma + d2);
      const double r = sigma - d2;
      const double tail = (std::abs(r) < 1e-14) ? t * std::exp(-sigma * t)
                                                : (std::exp(-d2 * t) - std::exp(-sigma * t)) / r;
      return head + tail;
    }
  }
  return 0.0;
}

ForcingSpec ForcingSpec::with_amplitude(FieldPtr a) const {
  ForcingSpec f = *this;
  f.amplitude = std::move(a);
  return f;
}

}  // namespace nsv
