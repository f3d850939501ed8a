#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsv/certificates.hpp"
#include "nsv/run.hpp"

namespace nsv {

/// Initial datum of a sweep member: current field and a constant history.
struct InitialDatum {
  std::string id;
  FieldPtr u0;
  FieldPtr history_value;  // null: history equal to u0
};

struct CloudMember {
  ProcessState state;
  std::int64_t tau_step = 0;
  std::string datum_id;
};

/// Endpoint states at a common time.
struct StateCloud {
  std::int64_t step = 0;
  double dt = 0.0;
  std::vector<CloudMember> members;
  double time() const { return static_cast<double>(step) * dt; }
};

/// sup over a in A of min over b in B of the phase-space distance.
double semidistance(const StateCloud& a, const StateCloud& b);

struct SweepResult {
  /// clouds[n] holds U(t*, tau_n) applied to the family.
  std::vector<StateCloud> clouds;
  std::vector<double> taus;
  /// d_n = semidistance(clouds[n], deepest cloud).
  std::vector<double> d;
};

/// Evolve every family member from each tau in `taus` (strictly decreasing)
/// to t_star. Members run concurrently; the result does not depend on the
/// schedule.
SweepResult pullback_sweep(double t_star, const std::vector<double>& taus,
                           const std::vector<InitialDatum>& family, const Problem& p,
                           const StepperConfig& cfg);

/// Cloud holding the single state zero (with zero history).
StateCloud zero_cloud(const Grid& grid, std::int64_t step, double dt, int steps_per_h);

struct RegularitySplit {
  Run v_run;  // forced by f - f_theta, zero history, no delay term
  Run w_run;  // forced by f_theta + g(t, u_t) with u_t from the parent run
  ForcingSpec f_theta;
  int truncation_K = 0;
  double xi = 0.0;
  /// sup_t |f - f_theta| in H and V' norms
  double residual_h = 0.0;
  double residual_vdual = 0.0;
  BoundCertificate w_bound;
  BoundCertificate v_bound;
  /// max_t |u - (v + w)|_V / max(1, max_t |u|_V); exact additivity holds only
  /// without convection.
  double additivity_gap = 0.0;
};

/// Smallest spectral truncation of the forcing amplitude with
/// sup_t |f - f_theta| < xi in both H and V'. Throws ConfigError for xi <= 0.
ForcingSpec truncate_forcing(const ForcingSpec& f, double xi, int* K_out = nullptr,
                             double* res_h = nullptr, double* res_vdual = nullptr);

/// Split the parent run (which must store its fields) into the two
/// subsystems and certify the D(A) bounds of each.
RegularitySplit regularity_split(const Run& parent, double xi, const HypothesisWindow& w);

/// D(A) bound along a run driven by `forcing` (+ `extra` series):
/// |A w(t)|^2 <= alpha^{-2}[e^{-s(t-tau)} Y(tau)
///                + e^{-s t} int e^{s r}(|F|^2 / (nu/2) + 27 C2^4 |grad w|^6 / (2 nu^3)) dr]
/// with Y = |grad w|^2 + alpha^2 |A w|^2 and s = min(sigma, nu / (1/lambda1 + alpha^2)).
BoundCertificate certify_regularity(const Run& run, const std::vector<double>& forcing_h_sq,
                                    const HypothesisWindow& w, const std::string& id);

}  // namespace nsv
