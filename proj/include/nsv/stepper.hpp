#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nsv/delay.hpp"
#include "nsv/forcing.hpp"
#include "nsv/history.hpp"

namespace nsv {

enum class Scheme { ImexEuler, ImexCnab2 };
const char* scheme_name(Scheme s);

struct StepperConfig {
  double dt = 1e-2;
  Scheme scheme = Scheme::ImexCnab2;
};

/// Right-hand side of d/dt (u + alpha^2 A u) + nu A u + B(u) = f + g(t, u_t) (+ extra).
struct Problem {
  double nu = 1.0;
  double alpha = 1.0;
  ForcingSpec forcing;
  DelaySpec delay;
  /// Set to false for the linear fixtures.
  bool convection = true;
  /// Set to false to drop the delay term read from the state's own history.
  bool self_delay = true;
  /// Optional additional explicit forcing evaluated at a step index (used to
  /// feed a subsystem with a delay term read from another run).
  std::function<SpectralField(std::int64_t step)> extra;
};

/// Terms of the discrete energy identity of one step:
///   mass_change + dissipation + splitting
///     = work_f + work_g + work_extra - work_B + work_memory + residual
/// with mass_change = (|u+|^2_M - |u|^2_M)/2, |w|^2_M = |w|^2 + alpha^2 |grad w|^2.
/// Work terms are dt <piece, z> against the scheme's implicit test function z
/// (u+ for the one-step scheme, (u + u+)/2 for the multistep one); current
/// pieces carry the extrapolation weight 3/2 and work_memory holds the
/// -1/2 share of the previous explicit term.
struct StepBudget {
  double t = 0.0;
  double mass_change = 0.0;
  double dissipation = 0.0;
  double splitting = 0.0;  // M|u+ - u|^2 / 2 for the one-step scheme, 0 otherwise
  double work_f = 0.0;
  double work_g = 0.0;
  double work_extra = 0.0;
  double work_B = 0.0;
  double work_memory = 0.0;
  double residual = 0.0;
};

/// Pieces of the explicit term at the state's step.
struct ExplicitPieces {
  SpectralField forcing, delay, extra, convection;
  SpectralField total() const;  // forcing + delay + extra - convection
};
ExplicitPieces explicit_pieces(const ProcessState& s, const Problem& p);

/// Advance one step. Throws BlowUpError when a coefficient becomes
/// non-finite or exceeds 1e12 in modulus.
ProcessState step(const ProcessState& s, const Problem& p, const StepperConfig& cfg,
                  StepBudget* budget = nullptr);

/// Number of steps of size dt in a duration (must be an integer multiple).
std::int64_t steps_for(double duration, double dt);

/// Mass-weighted energy |u|^2 + alpha^2 |grad u|^2.
double mass_energy(const SpectralField& u, double alpha);

}  // namespace nsv
