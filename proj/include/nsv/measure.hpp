#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nsv/certificates.hpp"
#include "nsv/run.hpp"

namespace nsv {

/// Real-valued observable of a state.
struct Functional {
  std::string id;
  std::function<double(const ProcessState&)> eval;
};

namespace functionals {
Functional one();
Functional energy();          // |u|^2
Functional enstrophy();       // |grad u|^2
Functional phase_norm_sq();   // |(u, u_t)|^2 in the phase space
/// Real or imaginary part of one coefficient.
Functional mode_projection(const Grid& grid, const IntVec& mode, int comp, bool imag = false);
/// a * phi + b * psi
Functional combine(double a, const Functional& phi, double b, const Functional& psi);
/// fn(phi(state)) for a bounded continuous fn
Functional compose(const Functional& phi, std::function<double(double)> fn, const std::string& id);
/// Look up a built-in by id: one, energy, enstrophy, ev2, mode:<m1>,<m2>[,<m3>]:<comp>[:im]
Functional by_id(const std::string& id, const Grid& grid);
}  // namespace functionals

/// Family of initial states s -> rho(s) (a state at step s).
using StateFamily = std::function<ProcessState(std::int64_t step)>;

/// Constant family: the same current field and constant history at every s.
StateFamily constant_family(FieldPtr u, double dt, int steps_per_h);

struct MeasureSample {
  std::int64_t start_step = 0;  // s
  std::int64_t multiplicity = 0;
  double weight = 0.0;
  ProcessState state;           // U(t, s) rho(s)
};

/// Discrete approximation of a probability measure at time t built from the
/// window [tau, t]: trapezoid weights on the stride grid, stored as integer
/// multiplicities (1 at the ends, 2 inside) so the weights sum to one.
struct EmpiricalMeasure {
  std::int64_t step = 0;       // t
  std::int64_t tau_step = 0;   // window start
  double dt = 0.0;
  std::int64_t total_multiplicity = 0;
  std::vector<MeasureSample> samples;

  double time() const { return static_cast<double>(step) * dt; }
  double integrate(const Functional& phi) const;
  double weight_sum() const;
};

/// Cached evaluation of U(t, s) rho(s). Each start s keeps its most advanced
/// state, so requests with increasing t only step forward; by the cocycle
/// property this equals a direct evolution bit for bit.
class PushforwardCache {
 public:
  PushforwardCache(Problem p, StepperConfig cfg, StateFamily rho);

  /// States U(t, s) rho(s) for every s in `starts`; computed in parallel.
  std::vector<ProcessState> states_at(const std::vector<std::int64_t>& starts, std::int64_t t_step);
  const Problem& problem() const { return problem_; }
  const StepperConfig& config() const { return cfg_; }
  std::size_t size() const { return cache_.size(); }

 private:
  Problem problem_;
  StepperConfig cfg_;
  StateFamily rho_;
  std::mutex mutex_;
  std::map<std::int64_t, ProcessState> cache_;
};

/// Sample starts of the window [tau, t] on a stride grid.
std::vector<std::int64_t> window_starts(std::int64_t tau_step, std::int64_t t_step,
                                        std::int64_t stride);

EmpiricalMeasure build_measure(PushforwardCache& cache, std::int64_t t_step,
                               std::int64_t tau_step, std::int64_t stride);

/// Trapezoid average of phi(U(t, s) rho(s)) over s in [tau, t]; equals
/// integrating phi against build_measure with the same stride.
double time_average(const Functional& phi, PushforwardCache& cache, std::int64_t tau_step,
                    std::int64_t t_step, std::int64_t stride = 1);

/// |int phi d mu_t - int phi o U(t, tau) d mu_tau| per functional, with mu_t
/// built at the same window depth as mu_tau.
std::vector<double> invariance_residual(const EmpiricalMeasure& mu_tau, std::int64_t t_step,
                                        const std::vector<Functional>& phis,
                                        PushforwardCache& cache, std::int64_t stride);

struct DepthRow {
  double depth = 0.0;
  std::vector<double> value;          // int phi d mu_t
  std::vector<double> residual;       // plain
  std::vector<double> extrapolated;   // 2 r(2D) - r(D), signed difference; empty for the first row
};

struct DepthSweep {
  std::vector<std::string> ids;
  std::vector<DepthRow> rows;
  /// Largest |extrapolated| in the last row.
  double convergence_indicator = 0.0;
};

/// Invariance residuals at window depths D, 2D, 4D, ... (`doublings` + 1 rows).
/// Richardson extrapolation acts on the signed differences, removing the
/// 1/D transient of the finite-window averages.
DepthSweep depth_doubling(PushforwardCache& cache, std::int64_t tau_step, std::int64_t t_step,
                          double base_depth, int doublings, std::int64_t stride,
                          const std::vector<Functional>& phis);

/// Support check: samples whose start lies deeper than the entry depth
/// (e^{-sigma (t - s)} |rho(s)|^2 < 1e-3 R1^2) must lie in the R1 ball.
BoundCertificate certify_support(const EmpiricalMeasure& mu, const StateFamily& rho,
                                 const ForcingSpec& f, const HypothesisWindow& w);

}  // namespace nsv
