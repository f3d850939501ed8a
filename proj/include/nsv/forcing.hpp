#pragma once

#include <memory>

#include "nsv/spectral_field.hpp"

namespace nsv {

enum class ForcingKind { Zero, Constant, Periodic, ExpWindowed };

const char* forcing_kind_name(ForcingKind k);

/// f(t) = p(t) F with a fixed divergence-free amplitude F and
///   Zero:        p = 0
///   Constant:    p = 1
///   Periodic:    p = c0 + a1 cos(omega t)
///   ExpWindowed: p = exp(-delta |t|)
struct ForcingSpec {
  ForcingKind kind = ForcingKind::Zero;
  FieldPtr amplitude;  // null for Zero
  double c0 = 1.0, a1 = 0.0, omega = 0.0;
  double delta = 0.0;

  double profile(double t) const;
  /// sup_t |p(t)|
  double profile_sup() const;
  SpectralField at(double t, const Grid& grid) const;
  /// e^{-sigma t} int_{-inf}^t e^{sigma s} p(s)^2 ds in closed form; infinite
  /// when the integrability condition fails for this sigma.
  double weighted_profile_integral(double sigma, double t) const;
  /// True when int_{-inf}^t e^{sigma s} |f(s)|^2_{V'} ds is finite.
  bool integrable(double sigma) const;

  /// Same time profile, different amplitude.
  ForcingSpec with_amplitude(FieldPtr a) const;
};

}  // namespace nsv
