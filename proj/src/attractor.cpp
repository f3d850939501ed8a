#include "nsv/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

double semidistance(const StateCloud& a, const StateCloud& b) {
  if (a.members.empty() || b.members.empty()) throw DomainError("semidistance: empty cloud");
  if (a.step != b.step) throw ConfigError("semidistance: clouds at different times");
  double sup = 0.0;
  for (const auto& x : a.members) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& y : b.members) inf = std::min(inf, ev2_distance_sq(x.state, y.state));
    sup = std::max(sup, inf);
  }
  return std::sqrt(sup);
}

StateCloud zero_cloud(const Grid& grid, std::int64_t step, double dt, int nh) {
  StateCloud c;
  c.step = step;
  c.dt = dt;
  c.members.push_back(
      CloudMember{make_constant_state(step, dt, nh, make_field_ptr(SpectralField(grid))), step, "zero"});
  return c;
}

SweepResult pullback_sweep(double t_star, const std::vector<double>& taus,
                           const std::vector<InitialDatum>& family, const Problem& p,
                           const StepperConfig& cfg) {
  if (taus.empty() || family.empty()) throw ConfigError("pullback_sweep: empty schedule or family");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] < taus[i - 1])) throw ConfigError("pullback_sweep: taus must strictly decrease");
  const double dt = cfg.dt;
  const std::int64_t tstep = steps_for(t_star, dt);
  const int nh = static_cast<int>(steps_for(p.delay.h, dt));

  SweepResult res;
  res.taus = taus;
  res.clouds.resize(taus.size());
  const std::size_t nm = family.size();
  const std::size_t jobs = taus.size() * nm;
  std::vector<ProcessState> ends(jobs);
  std::vector<std::int64_t> tau_steps(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    tau_steps[i] = steps_for(taus[i], dt);
    if (tau_steps[i] > tstep) throw ConfigError("pullback_sweep: tau after t*");
  }

  std::exception_ptr err;
  std::string err_where;
  const long long nj = static_cast<long long>(jobs);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long jj = 0; jj < nj; ++jj) {
    const std::size_t j = static_cast<std::size_t>(jj);
    const std::size_t ti = j / nm, mi = j % nm;
    try {
      const InitialDatum& d = family[mi];
      FieldPtr hist = d.history_value ? d.history_value : d.u0;
      ProcessState s0 = make_state(tau_steps[ti], dt, d.u0, HistorySegment::constant(dt, nh, hist));
      ends[j] = evolve_state(s0, tstep, p, cfg);
    } catch (...) {
#pragma omp critical(nsv_sweep_error)
      {
        if (!err) {
          err = std::current_exception();
          err_where = "tau=" + std::to_string(taus[ti]) + " member=" + family[mi].id;
        }
      }
    }
  }
  if (err) {
    try {
      std::rethrow_exception(err);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.time(), std::string(e.what()) + " (" + err_where + ")");
    }
  }

  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    StateCloud& c = res.clouds[ti];
    c.step = tstep;
    c.dt = dt;
    for (std::size_t mi = 0; mi < nm; ++mi)
      c.members.push_back(CloudMember{std::move(ends[ti * nm + mi]), tau_steps[ti], family[mi].id});
  }
  for (const auto& c : res.clouds) res.d.push_back(semidistance(c, res.clouds.back()));
  return res;
}

// ---------------------------------------------------------------- regularity

ForcingSpec truncate_forcing(const ForcingSpec& f, double xi, int* K_out, double* res_h,
                             double* res_vdual) {
  if (!(xi > 0.0)) throw ConfigError("regularity split: xi must be positive");
  ForcingSpec out = f;
  auto report = [&](int K, double rh, double rv) {
    if (K_out) *K_out = K;
    if (res_h) *res_h = rh;
    if (res_vdual) *res_vdual = rv;
  };
  if (f.kind == ForcingKind::Zero || !f.amplitude) {
    report(0, 0.0, 0.0);
    return out;
  }
  const SpectralField& F = *f.amplitude;
  const Grid& g = F.grid();
  const double sup = f.profile_sup();
  // |m|^2 thresholds up to the largest retained shell
  const int kmax_sq = g.dim() * g.kmax() * g.kmax();
  for (int K2 = 0; K2 <= kmax_sq; ++K2) {
    SpectralField head(g), tail(g);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
      const IntVec mi = g.mode(m);
      const int msq = mi[0] * mi[0] + mi[1] * mi[1] + mi[2] * mi[2];
      for (int d = 0; d < g.dim(); ++d) (msq <= K2 ? head : tail).coeff(m, d) = F.coeff(m, d);
    }
    const double rh = sup * norm(tail, Space::H);
    const double rv = sup * norm(tail, Space::Vdual);
    if (rh < xi && rv < xi) {
      out.amplitude = make_field_ptr(std::move(head));
      report(K2, rh, rv);
      return out;
    }
  }
  report(kmax_sq, 0.0, 0.0);
  return out;
}

BoundCertificate certify_regularity(const Run& run, const std::vector<double>& fh,
                                    const HypothesisWindow& w, const std::string& id) {
  BoundCertificate c;
  c.id = id;
  const PhysicalParams& p = w.params;
  const double a2 = w.alpha2();
  const double theta = 0.5;
  const double s = std::min(w.sigma, 2.0 * p.nu * (1.0 - theta) / (1.0 / p.lambda1 + a2));
  const double cb = 27.0 * std::pow(p.emb.C2, 4) / (16.0 * std::pow(theta * p.nu, 3));
  const double dt = run.dt();
  const double y0 = run.energy.front().v2 + a2 * run.energy.front().a2;
  std::vector<double> src(run.energy.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    src[i] = fh[i] / (theta * p.nu) + cb * std::pow(run.energy[i].v2, 3);
  double acc = 0.0;
  const double decay = std::exp(-s * dt);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (i > 0) acc = decay * acc + 0.5 * dt * (decay * src[i - 1] + src[i]);
    const double elapsed = run.time_at(i) - run.tau();
    c.times.push_back(run.time_at(i));
    c.lhs.push_back(run.energy[i].a2);
    c.rhs.push_back((std::exp(-s * elapsed) * y0 + acc) / a2);
  }
  c.constants = {{"rate", s}, {"theta", theta}, {"cubic_coeff", cb}, {"Y0", y0}};
  c.finalize();
  return c;
}

namespace {

HistorySegment parent_history_at(const Run& parent, std::int64_t offset, int nh) {
  std::vector<FieldPtr> slots;
  slots.reserve(static_cast<std::size_t>(nh) + 1);
  for (std::int64_t j = offset - nh; j <= offset; ++j) slots.push_back(parent.field_at(j));
  return HistorySegment(parent.dt(), nh, std::move(slots));
}

}  // namespace

RegularitySplit regularity_split(const Run& parent, double xi, const HypothesisWindow& w) {
  if (parent.fields.empty())
    throw InsufficientDataError("regularity_split: parent run needs stored fields");
  RegularitySplit out;
  out.xi = xi;
  const Problem& pp = parent.problem;
  const ForcingSpec& f = pp.forcing;
  out.f_theta = truncate_forcing(f, xi, &out.truncation_K, &out.residual_h, &out.residual_vdual);

  const Grid& g = parent.initial.grid();
  const double dt = parent.dt();
  const int nh = parent.initial.history.steps_per_h();
  const std::int64_t n = parent.num_steps();

  ForcingSpec f_rest = f;
  if (f.kind != ForcingKind::Zero && f.amplitude) {
    SpectralField rest = *f.amplitude;
    if (out.f_theta.amplitude) rest -= *out.f_theta.amplitude;
    f_rest.amplitude = make_field_ptr(std::move(rest));
  }

  // Delay term of the parent along its trajectory.
  std::vector<SpectralField> gseries(static_cast<std::size_t>(n) + 1, SpectralField(g));
  if (pp.self_delay && pp.delay.gain != 0.0) {
    const long long nn = static_cast<long long>(n) + 1;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) {
      const HistorySegment hseg = parent_history_at(parent, i, nh);
      gseries[static_cast<std::size_t>(i)] =
          delay_g(pp.delay, parent.time_at(static_cast<std::size_t>(i)), hseg);
    }
  }

  const FieldPtr zero = make_field_ptr(SpectralField(g));
  EvolveOptions opt;
  opt.store_fields = true;

  Problem pv = pp;
  pv.forcing = f_rest;
  pv.self_delay = false;
  pv.extra = nullptr;
  ProcessState v0 = make_state(parent.initial.step, dt, parent.initial.u,
                               HistorySegment::constant(dt, nh, zero));
  out.v_run = evolve(v0, parent.final.step, pv, parent.cfg, opt);

  Problem pw = pp;
  pw.forcing = out.f_theta;
  pw.self_delay = false;
  const std::int64_t base = parent.initial.step;
  pw.extra = [&gseries, base](std::int64_t step) {
    return gseries.at(static_cast<std::size_t>(step - base));
  };
  ProcessState w0 = make_state(parent.initial.step, dt, zero, parent.initial.history);
  out.w_run = evolve(w0, parent.final.step, pw, parent.cfg, opt);
  out.w_run.problem.extra = nullptr;  // the closure refers to local data

  // |F|^2 in H along each subsystem
  std::vector<double> fw(gseries.size()), fv(gseries.size());
  for (std::size_t i = 0; i < gseries.size(); ++i) {
    const double t = parent.time_at(i);
    SpectralField F = out.f_theta.at(t, g);
    F += gseries[i];
    fw[i] = norm_sq(F, Space::H);
    fv[i] = norm_sq(f_rest.at(t, g), Space::H);
  }
  out.w_bound = certify_regularity(out.w_run, fw, w, "regularity-w");
  out.v_bound = certify_regularity(out.v_run, fv, w, "regularity-v");

  double gap = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < parent.fields.size(); ++i) {
    SpectralField sum = *out.v_run.fields[i];
    sum += *out.w_run.fields[i];
    gap = std::max(gap, norm(*parent.fields[i] - sum, Space::V));
    scale = std::max(scale, std::sqrt(parent.energy[i].v2));
  }
  out.additivity_gap = gap / scale;
  return out;
}

}  // namespace nsv
