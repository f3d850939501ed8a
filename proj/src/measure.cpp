#include "nsv/measure.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

namespace functionals {

Functional one() {
  return {"one", [](const ProcessState&) { return 1.0; }};
}
Functional energy() {
  return {"energy", [](const ProcessState& s) { return norm_sq(*s.u, Space::H); }};
}
Functional enstrophy() {
  return {"enstrophy", [](const ProcessState& s) { return norm_sq(*s.u, Space::V); }};
}
Functional phase_norm_sq() {
  return {"ev2", [](const ProcessState& s) { return ev2_norm_sq(s); }};
}

Functional mode_projection(const Grid& grid, const IntVec& m, int comp, bool imag) {
  const std::size_t idx = grid.index_of(m);
  if (idx >= grid.num_modes() || comp < 0 || comp >= grid.dim())
    throw ConfigError("mode_projection: mode or component not retained");
  std::ostringstream id;
  id << "mode:" << m[0] << "," << m[1];
  if (grid.dim() == 3) id << "," << m[2];
  id << ":" << comp << (imag ? ":im" : "");
  return {id.str(), [idx, comp, imag](const ProcessState& s) {
            const Complex c = s.u->coeff(idx, comp);
            return imag ? c.imag() : c.real();
          }};
}

Functional combine(double a, const Functional& phi, double b, const Functional& psi) {
  std::ostringstream id;
  id << a << "*" << phi.id << "+" << b << "*" << psi.id;
  auto f = phi.eval, g = psi.eval;
  return {id.str(), [a, b, f, g](const ProcessState& s) { return a * f(s) + b * g(s); }};
}

Functional compose(const Functional& phi, std::function<double(double)> fn, const std::string& id) {
  auto f = phi.eval;
  return {id, [f, fn](const ProcessState& s) { return fn(f(s)); }};
}

Functional by_id(const std::string& id, const Grid& grid) {
  if (id == "one") return one();
  if (id == "energy") return energy();
  if (id == "enstrophy") return enstrophy();
  if (id == "ev2") return phase_norm_sq();
  if (id.rfind("mode:", 0) == 0) {
    // mode:<m1>,<m2>[,<m3>]:<comp>[:im]
    std::string rest = id.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("functional id: missing component in " + id);
    IntVec m{0, 0, 0};
    std::istringstream ms(rest.substr(0, colon));
    std::string part;
    int k = 0;
    while (std::getline(ms, part, ',')) {
      if (k >= 3) throw ConfigError("functional id: too many mode indices in " + id);
      m[static_cast<std::size_t>(k++)] = std::stoi(part);
    }
    std::string tail = rest.substr(colon + 1);
    bool imag = false;
    const auto c2 = tail.find(':');
    if (c2 != std::string::npos) {
      imag = tail.substr(c2 + 1) == "im";
      tail = tail.substr(0, c2);
    }
    return mode_projection(grid, m, std::stoi(tail), imag);
  }
  throw ConfigError("unknown functional id: " + id);
}

}  // namespace functionals

StateFamily constant_family(FieldPtr u, double dt, int nh) {
  return [u, dt, nh](std::int64_t step) { return make_constant_state(step, dt, nh, u); };
}

double EmpiricalMeasure::integrate(const Functional& phi) const {
  double s = 0.0;
  for (const auto& x : samples) s += static_cast<double>(x.multiplicity) * phi.eval(x.state);
  return s / static_cast<double>(total_multiplicity);
}

double EmpiricalMeasure::weight_sum() const {
  double s = 0.0;
  for (const auto& x : samples) s += x.weight;
  return s;
}

PushforwardCache::PushforwardCache(Problem p, StepperConfig cfg, StateFamily rho)
    : problem_(std::move(p)), cfg_(cfg), rho_(std::move(rho)) {}

std::vector<ProcessState> PushforwardCache::states_at(const std::vector<std::int64_t>& starts,
                                                      std::int64_t t_step) {
  std::vector<ProcessState*> slots(starts.size());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (starts[i] > t_step) throw ConfigError("pushforward: start after target time");
      auto it = cache_.find(starts[i]);
      if (it == cache_.end()) it = cache_.emplace(starts[i], rho_(starts[i])).first;
      // A request behind the cached state restarts from rho(s).
      if (it->second.step > t_step) it->second = rho_(starts[i]);
      slots[i] = &it->second;
    }
  }
  std::exception_ptr err;
  std::int64_t err_start = 0;
  const long long n = static_cast<long long>(slots.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long ii = 0; ii < n; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    try {
      // Duplicate starts share a slot; only advance if still behind.
      ProcessState* s = slots[i];
      bool first = true;
      for (std::size_t j = 0; j < i; ++j)
        if (slots[j] == s) first = false;
      if (first && s->step < t_step) *s = evolve_state(*s, t_step, problem_, cfg_);
    } catch (...) {
#pragma omp critical(nsv_measure_error)
      if (!err) {
        err = std::current_exception();
        err_start = starts[i];
      }
    }
  }
  if (err) {
    try {
      std::rethrow_exception(err);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.time(), std::string(e.what()) + " (start s = " +
                                      std::to_string(static_cast<double>(err_start) * cfg_.dt) + ")");
    }
  }
  std::vector<ProcessState> out;
  out.reserve(slots.size());
  for (auto* s : slots) out.push_back(*s);
  return out;
}

std::vector<std::int64_t> window_starts(std::int64_t tau_step, std::int64_t t_step,
                                        std::int64_t stride) {
  if (t_step < tau_step) throw ConfigError("measure window: tau after t");
  if (stride < 1 || (t_step - tau_step) % stride != 0)
    throw ConfigError("measure window: stride must divide the window length");
  std::vector<std::int64_t> s;
  for (std::int64_t k = tau_step; k <= t_step; k += stride) s.push_back(k);
  return s;
}

namespace {

EmpiricalMeasure assemble_measure(std::int64_t t_step, std::int64_t tau_step, double dt,
                                  const std::vector<std::int64_t>& starts,
                                  std::vector<ProcessState> states) {
  EmpiricalMeasure mu;
  mu.step = t_step;
  mu.tau_step = tau_step;
  mu.dt = dt;
  const std::size_t n = starts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t m = (n == 1) ? 1 : ((i == 0 || i + 1 == n) ? 1 : 2);
    mu.total_multiplicity += m;
    mu.samples.push_back(MeasureSample{starts[i], m, 0.0, std::move(states[i])});
  }
  for (auto& x : mu.samples)
    x.weight = static_cast<double>(x.multiplicity) / static_cast<double>(mu.total_multiplicity);
  return mu;
}

}  // namespace

EmpiricalMeasure build_measure(PushforwardCache& cache, std::int64_t t_step, std::int64_t tau_step,
                               std::int64_t stride) {
  const std::vector<std::int64_t> starts = window_starts(tau_step, t_step, stride);
  return assemble_measure(t_step, tau_step, cache.config().dt, starts,
                          cache.states_at(starts, t_step));
}

double time_average(const Functional& phi, PushforwardCache& cache, std::int64_t tau_step,
                    std::int64_t t_step, std::int64_t stride) {
  return build_measure(cache, t_step, tau_step, stride).integrate(phi);
}

std::vector<double> invariance_residual(const EmpiricalMeasure& mu_tau, std::int64_t t_step,
                                        const std::vector<Functional>& phis,
                                        PushforwardCache& cache, std::int64_t stride) {
  if (t_step < mu_tau.step) throw ConfigError("invariance_residual: t precedes the measure time");
  const std::int64_t depth = mu_tau.step - mu_tau.tau_step;
  EmpiricalMeasure mu_t = build_measure(cache, t_step, t_step - depth, stride);

  // Push the samples of mu_tau forward by U(t, tau).
  EmpiricalMeasure pushed = mu_tau;
  pushed.step = t_step;
  std::vector<std::int64_t> starts;
  for (const auto& x : mu_tau.samples) starts.push_back(x.start_step);
  std::vector<ProcessState> moved = cache.states_at(starts, t_step);
  for (std::size_t i = 0; i < moved.size(); ++i) pushed.samples[i].state = std::move(moved[i]);

  std::vector<double> out;
  for (const auto& phi : phis) out.push_back(std::abs(mu_t.integrate(phi) - pushed.integrate(phi)));
  return out;
}

DepthSweep depth_doubling(PushforwardCache& cache, std::int64_t tau_step, std::int64_t t_step,
                          double base_depth, int doublings, std::int64_t stride,
                          const std::vector<Functional>& phis) {
  DepthSweep sweep;
  for (const auto& p : phis) sweep.ids.push_back(p.id);
  const double dt = cache.config().dt;
  const std::int64_t dmax = steps_for(base_depth * std::pow(2.0, doublings), dt);
  // Evaluate every start at tau before any is advanced to t, so each cached
  // trajectory is stepped forward exactly once.
  const std::vector<std::int64_t> tau_starts = window_starts(tau_step - dmax, tau_step, stride);
  std::vector<ProcessState> tau_states = cache.states_at(tau_starts, tau_step);
  std::map<std::int64_t, const ProcessState*> at_tau;
  for (std::size_t i = 0; i < tau_starts.size(); ++i) at_tau[tau_starts[i]] = &tau_states[i];

  std::vector<double> prev_signed;
  for (int k = 0; k <= doublings; ++k) {
    const double depth = base_depth * std::pow(2.0, k);
    const std::int64_t d = steps_for(depth, dt);
    const std::vector<std::int64_t> starts = window_starts(tau_step - d, tau_step, stride);
    std::vector<ProcessState> states;
    for (auto st : starts) states.push_back(*at_tau.at(st));
    EmpiricalMeasure mu_tau = assemble_measure(tau_step, tau_step - d, dt, starts, std::move(states));
    std::vector<ProcessState> moved = cache.states_at(starts, t_step);
    EmpiricalMeasure pushed = mu_tau;
    for (std::size_t i = 0; i < moved.size(); ++i) pushed.samples[i].state = std::move(moved[i]);
    EmpiricalMeasure mu_t = build_measure(cache, t_step, t_step - d, stride);

    DepthRow row;
    row.depth = depth;
    std::vector<double> signed_r;
    for (const auto& phi : phis) {
      const double v = mu_t.integrate(phi);
      const double r = v - pushed.integrate(phi);
      row.value.push_back(v);
      signed_r.push_back(r);
      row.residual.push_back(std::abs(r));
    }
    if (!prev_signed.empty())
      for (std::size_t i = 0; i < phis.size(); ++i)
        row.extrapolated.push_back(std::abs(2.0 * signed_r[i] - prev_signed[i]));
    prev_signed = signed_r;
    sweep.rows.push_back(std::move(row));
  }
  sweep.convergence_indicator = 0.0;
  if (!sweep.rows.back().extrapolated.empty())
    for (double x : sweep.rows.back().extrapolated)
      sweep.convergence_indicator = std::max(sweep.convergence_indicator, x);
  return sweep;
}

BoundCertificate certify_support(const EmpiricalMeasure& mu, const StateFamily& rho,
                                 const ForcingSpec& f, const HypothesisWindow& w) {
  BoundCertificate c;
  c.id = "support-R1";
  c.tol = 0.0;
  const double t = mu.time();
  const double r1 = absorbing_radius_sq(f, w, t);
  for (const auto& x : mu.samples) {
    const double depth = t - static_cast<double>(x.start_step) * mu.dt;
    const double e0 = ev2_norm_sq(rho(x.start_step));
    const bool deep = std::exp(-w.sigma * depth) * e0 < kAbsorbDepthTol * r1;
    c.times.push_back(static_cast<double>(x.start_step) * mu.dt);
    c.lhs.push_back(ev2_norm_sq(x.state));
    c.rhs.push_back(r1);
    c.sample_verdicts.push_back(deep ? Verdict::Pass : Verdict::Inconclusive);
  }
  c.constants = {{"R1_sq", r1}};
  c.note = "samples shallower than the entry depth are not checked";
  c.finalize();
  // Shallow samples are outside the claim; the verdict covers the deep ones.
  if (c.verdict == Verdict::Inconclusive) {
    bool any_deep = false;
    for (auto v : c.sample_verdicts) any_deep |= v == Verdict::Pass;
    c.verdict = any_deep ? Verdict::Pass : Verdict::Inconclusive;
  }
  return c;
}

}  // namespace nsv
