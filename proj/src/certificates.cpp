#include "nsv/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

void BoundCertificate::finalize() {
  min_margin = INFINITY;
  bool fail = false, inconclusive = false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const bool skip = !sample_verdicts.empty() && sample_verdicts[i] == Verdict::Inconclusive;
    if (skip) {
      inconclusive = true;
      continue;
    }
    min_margin = std::min(min_margin, rhs[i] - lhs[i]);
    const bool ok = lhs[i] <= rhs[i] * (1.0 + tol);
    if (!sample_verdicts.empty()) sample_verdicts[i] = ok ? Verdict::Pass : Verdict::Fail;
    if (!ok) fail = true;
  }
  if (min_margin == INFINITY) min_margin = 0.0;
  verdict = fail ? Verdict::Fail : (inconclusive ? Verdict::Inconclusive : Verdict::Pass);
}

namespace {

/// Running value of e^{-sigma t_i} int_{t_0}^{t_i} e^{sigma s} x(s) ds by the
/// trapezoid rule on a uniform grid.
std::vector<double> weighted_running_integral(const std::vector<double>& x, double sigma,
                                              double dt) {
  std::vector<double> out(x.size(), 0.0);
  const double decay = std::exp(-sigma * dt);
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = decay * out[i - 1] + 0.5 * dt * (decay * x[i - 1] + x[i]);
  return out;
}

double initial_ev2_sq(const Run& run) { return ev2_norm_sq(run.initial); }

std::vector<double> v2_series(const Run& run) {
  std::vector<double> v(run.energy.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = run.energy[i].v2;
  return v;
}

void require_length(const Run& run, double min_duration, const char* what) {
  if (run.t_end() - run.tau() < min_duration - 1e-9 * run.dt())
    throw InsufficientDataError(std::string(what) + ": run too short");
}

}  // namespace

BoundCertificate certify_decay(const Run& run, const HypothesisWindow& w) {
  require_length(run, run.initial.history.h(), "certify_decay");
  BoundCertificate c;
  c.id = "decay";
  const double sigma = w.sigma;
  const double dt = run.dt();
  const double e0 = initial_ev2_sq(run);
  const double K0 = w.K0();
  const double cf = 1.0 / (w.beta * w.alpha2());
  const std::vector<double> v = v2_series(run);
  const std::vector<double> iv = weighted_running_integral(v, sigma, dt);
  const std::vector<double> iff = weighted_running_integral(forcing_vdual_sq_series(run), sigma, dt);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = run.time_at(i) - run.tau();
    c.times.push_back(run.time_at(i));
    c.lhs.push_back(v[i] + w.eta1 * iv[i]);
    c.rhs.push_back(K0 * std::exp(-sigma * s) * e0 + cf * iff[i]);
  }
  c.constants = {{"sigma", sigma}, {"eta1", w.eta1}, {"K0", K0}, {"forcing_coeff", cf},
                 {"initial_ev2_sq", e0}};
  c.finalize();
  return c;
}

BoundCertificate certify_window_integral(const Run& run, const HypothesisWindow& w) {
  const double h = run.initial.history.h();
  require_length(run, h, "certify_window_integral");
  BoundCertificate c;
  c.id = "window";
  const double sigma = w.sigma;
  const double dt = run.dt();
  const std::size_t nh = static_cast<std::size_t>(run.initial.history.steps_per_h());
  const double e0 = initial_ev2_sq(run);
  const double K0 = w.K0();
  const double cf = 1.0 / (w.beta * w.alpha2());
  const std::vector<double> v = v2_series(run);
  const std::vector<double> iff = weighted_running_integral(forcing_vdual_sq_series(run), sigma, dt);
  // window integral by running sum of trapezoid panels
  std::vector<double> panel_prefix(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i)
    panel_prefix[i] = panel_prefix[i - 1] + 0.5 * dt * (v[i - 1] + v[i]);
  for (std::size_t i = nh; i < v.size(); ++i) {
    const double s = run.time_at(i) - run.tau();
    c.times.push_back(run.time_at(i));
    c.lhs.push_back(panel_prefix[i] - panel_prefix[i - nh]);
    c.rhs.push_back((K0 * std::exp(-sigma * (s - h)) * e0 + cf * std::exp(sigma * h) * iff[i]) /
                    w.eta1);
  }
  c.constants = {{"sigma", sigma}, {"eta1", w.eta1}, {"K0", K0}, {"forcing_coeff", cf},
                 {"h", h}, {"initial_ev2_sq", e0}};
  c.finalize();
  return c;
}

double absorbing_radius_sq(const ForcingSpec& f, const HypothesisWindow& w, double t) {
  if (f.kind == ForcingKind::Zero || !f.amplitude) return 0.0;
  const double amp = norm_sq(*f.amplitude, Space::Vdual);
  const double rho = amp * f.weighted_profile_integral(w.sigma, t) / (w.beta * w.alpha2());
  return (1.0 + std::exp(w.sigma * w.params.h) / w.eta1) * rho;
}

BoundCertificate certify_absorbing(const std::vector<const Run*>& runs, const HypothesisWindow& w) {
  BoundCertificate c;
  c.id = "absorb-R1";
  c.tol = 0.0;
  if (runs.empty()) throw InsufficientDataError("certify_absorbing: no runs");
  const double tstar = runs.front()->t_end();
  const double r1 = absorbing_radius_sq(runs.front()->problem.forcing, w, tstar);
  const double transient_coeff = (1.0 + std::exp(w.sigma * w.params.h) / w.eta1) * w.K0();
  double worst_transient = 0.0;
  for (const Run* r : runs) {
    if (std::abs(r->t_end() - tstar) > 1e-9 * std::max(1.0, std::abs(tstar)))
      throw ConfigError("certify_absorbing: runs end at different times");
    const double e0 = initial_ev2_sq(*r);
    const double decay = std::exp(-w.sigma * (tstar - r->tau())) * e0;
    const bool deep = decay < kAbsorbDepthTol * r1;
    c.times.push_back(r->tau());
    c.lhs.push_back(ev2_norm_sq(r->final));
    c.rhs.push_back(r1);
    c.sample_verdicts.push_back(deep ? Verdict::Pass : Verdict::Inconclusive);
    worst_transient = std::max(worst_transient, transient_coeff * decay);
  }
  c.constants = {{"R1_sq", r1}, {"t_star", tstar}, {"transient_coeff", transient_coeff},
                 {"max_transient", worst_transient}, {"depth_tol", kAbsorbDepthTol}};
  c.note = "times hold the initial time of each run";
  c.finalize();
  return c;
}

BoundCertificate certify_derivative_bound(const Run& run, const HypothesisWindow& w) {
  const double h = run.initial.history.h();
  require_length(run, 2.0 * h, "certify_derivative_bound");
  BoundCertificate c;
  c.id = "deriv-R2";
  const PhysicalParams& p = w.params;
  const EmbeddingConstants& e = p.emb;
  const double il = 1.0 / p.lambda1;
  const double k7 = (4.0 * e.C7 - e.C4 - 2.0) / 4.0;
  const double dt = run.dt();
  const std::size_t nh = static_cast<std::size_t>(run.initial.history.steps_per_h());
  const std::size_t last = run.energy.size() - 1;
  const double t = run.t_end();

  double lhs = 0.0;
  for (std::size_t i = last - nh; i < last; ++i)
    lhs += 0.5 * dt * (run.energy[i].dtv2 + run.energy[i + 1].dtv2);

  double fwin = 0.0;
  const std::vector<double> fs = forcing_vdual_sq_series(run);
  for (std::size_t i = last - nh; i < last; ++i) fwin += 0.5 * dt * (fs[i] + fs[i + 1]);
  double vmax = 0.0;
  for (std::size_t i = last - 2 * nh; i <= last; ++i) vmax = std::max(vmax, run.energy[i].v2);

  const double sig = w.sigma;
  const double rho = p.lambda1 > 0.0 ? absorbing_radius_sq(run.problem.forcing, w, t) /
                                           (1.0 + std::exp(sig * h) / w.eta1)
                                     : 0.0;
  const double gfac = 2.0 * e.C6 * w.Cg * w.Cg * (il + 1.0) / w.eta1;
  const double c_rho = (0.5 * p.nu * std::exp(-sig * h) + gfac * std::exp(sig * h)) / k7;
  const double c_f = 1.0 / k7;
  const double c_m = 2.0 * e.C4 * h * (il + 1.0) * (il + 1.0) / k7;
  const double e0 = initial_ev2_sq(run);
  const double s = t - run.tau();
  const double transient =
      w.K0() * e0 *
      (0.5 * p.nu * std::exp(-sig * (s - h)) +
       std::exp(sig * h) * gfac * 0.5 * (std::exp(-sig * (s - h)) + std::exp(-sig * (s - 2.0 * h)))) /
      k7;
  const double r2 = 1.0 + c_rho * std::exp(2.0 * h * sig) * rho + c_f * fwin + c_m * vmax * vmax;

  c.times.push_back(t);
  c.lhs.push_back(lhs);
  c.rhs.push_back(r2 + transient);
  c.constants = {{"k7", k7},       {"c_rho", c_rho}, {"c_f", c_f},         {"c_m", c_m},
                 {"rho", rho},     {"R2_sq", r2},    {"transient", transient}};
  if (!(k7 > 0.0)) {
    c.sample_verdicts.push_back(Verdict::Inconclusive);
    c.note = "4 C7 - C4 - 2 <= 0: bound unavailable";
  }
  c.finalize();
  return c;
}

ContractionResult contraction_psi(const Run& a, const Run& b, const HypothesisWindow& w) {
  if (a.initial.step != b.initial.step || a.final.step != b.final.step || a.dt() != b.dt())
    throw ConfigError("contraction_psi: runs cover different time intervals");
  require_same_grid(a.initial.grid(), b.initial.grid(), "contraction_psi");
  if (a.fields.empty() || b.fields.empty())
    throw InsufficientDataError("contraction_psi: runs need stored fields");
  ContractionResult res;
  BoundCertificate& c = res.certificate;
  c.id = "contract";
  const PhysicalParams& p = w.params;
  const double il = 1.0 / p.lambda1;
  const double sig = w.sigma;
  const double dt = a.dt();
  const double h = a.initial.history.h();

  std::vector<double> x(a.fields.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = norm_sq(*a.fields[i] - *b.fields[i], Space::V) * b.energy[i].v2;
  const std::vector<double> ix = weighted_running_integral(x, sig, dt);
  const double pref = 2.0 * p.emb.C1 / w.alpha2() * (1.0 + 1.0 / w.eta2) * std::pow(il + 1.0, 3);
  const double d0 = ev2_distance_sq(a.initial, b.initial);
  const double K2 = w.K2();

  const std::size_t last = x.size() - 1;
  const double s = a.t_end() - a.tau();
  // e^{-sigma (t - h)} int e^{sigma s} ... = e^{sigma h} times the running value
  res.psi = pref * std::exp(sig * h) * ix[last];
  c.times.push_back(a.t_end());
  c.lhs.push_back(ev2_distance_sq(a.final, b.final));
  c.rhs.push_back((1.0 + 1.0 / w.eta2) * K2 * std::exp(-sig * (s - h)) * d0 + res.psi);
  c.constants = {{"psi", res.psi}, {"K2", K2}, {"eta2", w.eta2}, {"psi_prefactor", pref},
                 {"initial_distance_sq", d0}};
  c.finalize();
  return res;
}

BoundCertificate certify_lipschitz_in_initial_data(const Run& a, const Run& b,
                                                   const HypothesisWindow& w) {
  if (a.initial.step != b.initial.step || a.final.step != b.final.step || a.dt() != b.dt())
    throw ConfigError("certify_lipschitz: runs cover different time intervals");
  if (a.fields.empty() || b.fields.empty())
    throw InsufficientDataError("certify_lipschitz: runs need stored fields");
  BoundCertificate c;
  c.id = "lipschitz";
  const PhysicalParams& p = w.params;
  const double a2 = w.alpha2();
  const double dt = a.dt();
  double gmax = 0.0;
  for (std::size_t i = 0; i < a.energy.size(); ++i)
    gmax = std::max(gmax, std::sqrt(a.energy[i].v2) + std::sqrt(b.energy[i].v2));
  const double L = (p.nu + p.emb.C1 * gmax) / a2 +
                   std::max(2.0 * w.Cg / a2, w.Lg / std::sqrt(a2));
  const double growth = std::sqrt((1.0 / p.lambda1 + a2) / a2);
  std::vector<double> d(a.fields.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = norm(*a.fields[i] - *b.fields[i], Space::V);
  double integral = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) integral += 0.5 * dt * (d[i - 1] + d[i]);
    c.times.push_back(a.time_at(i));
    c.lhs.push_back(d[i]);
    c.rhs.push_back(L * integral + d[0] * growth);
  }
  c.constants = {{"L", L}, {"growth", growth}, {"max_grad_sum", gmax}};
  c.finalize();
  return c;
}

const std::vector<std::string>& single_run_certificate_ids() {
  static const std::vector<std::string> ids = {"decay", "window", "deriv-R2"};
  return ids;
}

}  // namespace nsv
