#include "nsv/run.hpp"

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

namespace {

EnergyRecord record_of(const SpectralField& u, double t) {
  EnergyRecord r;
  r.t = t;
  r.h2 = norm_sq(u, Space::H);
  r.v2 = norm_sq(u, Space::V);
  r.a2 = norm_sq(u, Space::DA);
  return r;
}

}  // namespace

double Run::v2_at(std::int64_t i) const {
  if (i >= 0) return energy.at(static_cast<std::size_t>(i)).v2;
  const std::int64_t j = static_cast<std::int64_t>(history_v2.size()) - 1 + i;
  if (j < 0) throw InsufficientDataError("run: index before the initial history");
  return history_v2[static_cast<std::size_t>(j)];
}

FieldPtr Run::field_at(std::int64_t i) const {
  if (i >= 0) {
    if (fields.empty()) throw InsufficientDataError("run: fields were not stored");
    return fields.at(static_cast<std::size_t>(i));
  }
  const std::int64_t j = static_cast<std::int64_t>(initial.history.size()) - 1 + i;
  if (j < 0) throw InsufficientDataError("run: index before the initial history");
  return initial.history.slot(static_cast<std::size_t>(j));
}

Run evolve(const ProcessState& s0, std::int64_t target_step, const Problem& p,
           const StepperConfig& cfg, const EvolveOptions& opt) {
  if (target_step < s0.step) throw ConfigError("evolve: target time precedes the initial time");
  if (p.self_delay && p.delay.gain != 0.0) p.delay.validate(s0.dt);
  Run run;
  run.initial = s0;
  run.problem = p;
  run.cfg = cfg;
  const std::size_t n = static_cast<std::size_t>(target_step - s0.step);
  run.energy.reserve(n + 1);
  if (opt.store_fields) run.fields.reserve(n + 1);
  for (std::size_t j = 0; j < s0.history.size(); ++j)
    run.history_v2.push_back(norm_sq(*s0.history.slot(j), Space::V));

  run.energy.push_back(record_of(*s0.u, s0.time()));
  if (opt.store_fields) run.fields.push_back(s0.u);

  ProcessState s = s0;
  FieldPtr prev = s0.u;
  for (std::size_t i = 0; i < n; ++i) {
    StepBudget b;
    s = step(s, p, cfg, opt.record_budget ? &b : nullptr);
    if (opt.record_budget) run.budget.push_back(b);
    run.energy.push_back(record_of(*s.u, s.time()));
    const double d = norm_sq(*s.u - *prev, Space::V) / (s.dt * s.dt);
    run.energy.back().dtv2 = d;
    if (i == 0) run.energy.front().dtv2 = d;
    if (opt.store_fields) run.fields.push_back(s.u);
    prev = s.u;
  }
  run.final = std::move(s);
  return run;
}

ProcessState evolve_state(const ProcessState& s0, std::int64_t target_step, const Problem& p,
                          const StepperConfig& cfg) {
  if (target_step < s0.step) throw ConfigError("evolve: target time precedes the initial time");
  ProcessState s = s0;
  while (s.step < target_step) s = step(s, p, cfg);
  return s;
}

std::vector<double> time_derivative_series(const Run& run) {
  std::vector<double> out(run.energy.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = run.energy[i].dtv2;
  return out;
}

std::vector<double> forcing_vdual_sq_series(const Run& run) {
  std::vector<double> out(run.energy.size(), 0.0);
  const ForcingSpec& f = run.problem.forcing;
  if (f.kind == ForcingKind::Zero || !f.amplitude) return out;
  const double amp = norm_sq(*f.amplitude, Space::Vdual);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double pt = f.profile(run.time_at(i));
    out[i] = amp * pt * pt;
  }
  return out;
}

}  // namespace nsv
