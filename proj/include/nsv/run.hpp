#pragma once

#include <cstdint>
#include <vector>

#include "nsv/stepper.hpp"

namespace nsv {

/// One row of the energy series.
struct EnergyRecord {
  double t = 0.0;
  double h2 = 0.0;   // |u|^2
  double v2 = 0.0;   // |grad u|^2
  double a2 = 0.0;   // |A u|^2
  double dtv2 = 0.0; // |d/dt u|_V^2 (finite difference)
};

struct EvolveOptions {
  /// Keep every intermediate field (needed by the pairwise certificates).
  bool store_fields = false;
  /// Record the per-step energy budget.
  bool record_budget = false;
};

/// A computed trajectory on [tau, t] with its side records.
struct Run {
  ProcessState initial;
  ProcessState final;
  Problem problem;
  StepperConfig cfg;
  /// energy[i] at step initial.step + i, i = 0..num_steps.
  std::vector<EnergyRecord> energy;
  std::vector<StepBudget> budget;
  /// fields[i] at step initial.step + i when store_fields was set.
  std::vector<FieldPtr> fields;
  /// |grad phi|^2 at the initial history slots, oldest first.
  std::vector<double> history_v2;

  std::int64_t num_steps() const { return final.step - initial.step; }
  double dt() const { return initial.dt; }
  double tau() const { return initial.time(); }
  double t_end() const { return final.time(); }
  double time_at(std::size_t i) const { return static_cast<double>(initial.step + static_cast<std::int64_t>(i)) * dt(); }
  /// |grad u|^2 at step offset i, reaching into the initial history for i < 0.
  double v2_at(std::int64_t i) const;
  /// Field at step offset i (requires store_fields), reaching into the initial
  /// history for i < 0.
  FieldPtr field_at(std::int64_t i) const;
};

/// U(t, tau): advance a state to target_step, recording the energy series.
Run evolve(const ProcessState& s0, std::int64_t target_step, const Problem& p,
           const StepperConfig& cfg, const EvolveOptions& opt = {});

/// As evolve but returns only the final state.
ProcessState evolve_state(const ProcessState& s0, std::int64_t target_step, const Problem& p,
                          const StepperConfig& cfg);

/// |d/dt u|_V^2 per step from stored fields: backward differences, forward at
/// the first step.
std::vector<double> time_derivative_series(const Run& run);

/// |f(t_i)|^2_{V'} along the run.
std::vector<double> forcing_vdual_sq_series(const Run& run);

}  // namespace nsv
