// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsv/artifacts.hpp"
#include "nsv/attractor.hpp"
#include "nsv/certificates.hpp"
#include "nsv/commands.hpp"
#include "nsv/measure.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "oracles/oracles.hpp"

using namespace nsv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

PhysicalParams params_for(const Grid& g, double h) {
  PhysicalParams p;
  p.nu = 1.0;
  p.alpha = 1.0;
  p.h = h;
  p.lambda1 = 1.0;
  p.emb = default_embedding_constants(g, 1.0);
  return p;
}

Problem periodic_problem(const Grid& g, double gain, bool convection) {
  Problem p;
  p.delay.h = 0.5;
  p.delay.gain = gain;
  p.convection = convection;
  p.forcing.kind = ForcingKind::Periodic;
  SpectralField f = random_field(g, 4242, 2.0, 1.0);
  f += shear_field(g, 0.5, 1);
  p.forcing.amplitude = make_field_ptr(std::move(f));
  p.forcing.c0 = 1.0;
  p.forcing.a1 = 0.5;
  p.forcing.omega = 1.0;
  return p;
}

// ------------------------------------------------------------------ 1

Outcome operator_identities() {
  Outcome o;
  double worst_anti = 0.0, worst_skew = 0.0;
  int triples = 0;
  for (int dim : {2, 3}) {
    Grid g(dim, dim == 2 ? 64 : 16);
    for (std::uint64_t s = 0; s < 100; ++s, ++triples) {
      const SpectralField u = random_field(g, 7000 + 3 * s), v = random_field(g, 7001 + 3 * s),
                          w = random_field(g, 7002 + 3 * s);
      const double scale = norm(u, Space::V) * norm(v, Space::V) * norm(w, Space::V);
      const double vv = norm(v, Space::V);
      worst_anti = std::max(worst_anti, std::abs(trilinear_b(u, v, v)) / (norm(u, Space::V) * vv * vv));
      worst_skew = std::max(worst_skew, std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)) / scale);
    }
  }
  double worst_dense = 0.0;
  for (int dim : {2, 3}) {
    Grid g(dim, 4);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const SpectralField u = random_field(g, 800 + s), v = random_field(g, 900 + s);
      const auto ps = convection(u, v);
      const auto dense = oracle::dense_convolution(u, v);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        diff = std::max(diff, std::abs(ps[i] - dense[i]));
        scale = std::max(scale, std::abs(dense[i]));
      }
      worst_dense = std::max(worst_dense, diff / scale);
    }
  }
  o.require(triples == 200, "200 triples");
  o.require(worst_anti <= 1e-12, "b(u,v,v) = 0");
  o.require(worst_skew <= 1e-12, "b(u,v,w) = -b(u,w,v)");
  o.require(worst_dense <= 1e-12, "dense oracle on n = 4");
  o.note(std::to_string(triples) + " triples, max rel |b(u,v,v)| " + fmt("%.2e", worst_anti) +
         ", skew " + fmt("%.2e", worst_skew) + ", dense n=4 " + fmt("%.2e", worst_dense));
  return o;
}

// ------------------------------------------------------------------ 2

double shear_amplitude_error(const Grid& g, const Problem& p, double dt, double T, double exact) {
  const int nh = static_cast<int>(steps_for(p.delay.h, dt));
  ProcessState s = make_constant_state(0, dt, nh, make_field_ptr(shear_field(g, 1.0, 1)));
  ProcessState e = evolve_state(s, steps_for(T, dt), p, StepperConfig{dt, Scheme::ImexCnab2});
  const double a = 2.0 * e.u->coeff(g.index_of({0, 1, 0}), 0).real();
  return std::abs(a - exact) / std::abs(exact);
}

Outcome linear_oracle() {
  Outcome o;
  Grid g(2, 64);
  const double nu = 1.0, alpha = 1.0, h = 0.5, T = 1.0;
  Problem p;
  p.nu = nu;
  p.alpha = alpha;
  p.delay.h = h;
  const double exact = std::exp(-nu * T / (1.0 + alpha * alpha));
  const double e1 = shear_amplitude_error(g, p, 1e-3, T, exact);
  const double e2 = shear_amplitude_error(g, p, 5e-4, T, exact);
  o.require(e1 <= 1e-3, "shear error <= 1e-3");
  o.require(std::abs(e1 / e2 - 4.0) <= 0.8, "shear order ratio 4 +- 20%");

  p.delay.gain = 0.1;
  const double ref = oracle::scalar_dde(1.0 + alpha * alpha, nu, 0.1, h, 1.0, T, 4000);
  const double d1 = shear_amplitude_error(g, p, 1e-3, T, ref);
  const double d2 = shear_amplitude_error(g, p, 5e-4, T, ref);
  o.require(d1 <= 1e-3, "delay error <= 1e-3");
  o.require(std::abs(d1 / d2 - 4.0) <= 0.8, "delay order ratio 4 +- 20%");
  o.note("shear err " + fmt("%.2e", e1) + " ratio " + fmt("%.3f", e1 / e2) + "; kappa=0.1 err " +
         fmt("%.2e", d1) + " ratio " + fmt("%.3f", d1 / d2));
  return o;
}

// ------------------------------------------------------------------ 3

Outcome process_axioms() {
  Outcome o;
  for (int dim : {2, 3}) {
    Grid g(dim, dim == 2 ? 32 : 8);
    const Problem p = periodic_problem(g, 0.1, true);
    for (Scheme sc : {Scheme::ImexCnab2, Scheme::ImexEuler}) {
      const StepperConfig cfg{0.01, sc};
      const ProcessState s0 = make_constant_state(-50, 0.01, 50, make_field_ptr(random_field(g, 61, 1.0, 1.0)));
      const std::string b0 = encode_checkpoint(s0, 0);
      o.require(encode_checkpoint(evolve_state(s0, s0.step, p, cfg), 0) == b0, "U(tau,tau) = id");
      const ProcessState mid = evolve_state(s0, 73, p, cfg);
      const ProcessState two = evolve_state(mid, 250, p, cfg);
      const ProcessState one = evolve_state(s0, 250, p, cfg);
      o.require(encode_checkpoint(two, 0) == encode_checkpoint(one, 0),
                std::string("cocycle ") + scheme_name(sc) + " dim " + std::to_string(dim));
    }
  }
  if (o.pass) o.note("identity and cocycle bit-exact (2D 32^2, 3D 8^3, both schemes)");
  return o;
}

// ------------------------------------------------------------------ 4

Outcome hypothesis_windows() {
  Outcome o;
  PhysicalParams p;
  p.nu = 1.0;
  p.alpha = 1.0;
  p.lambda1 = 1.0;
  p.h = 0.5;
  p.emb = default_embedding_constants(Grid(2, 16), 1.0);
  p.emb.C6 = 1.0;
  DelaySpec none;
  none.h = 0.5;
  const HypothesisWindow w0 = evaluate_hypotheses(p, none, HypothesisInputs{0.5, 0.25, std::nullopt});
  // direct evaluation with C_g = 0
  const double nu = 1.0, a2 = 1.0, il = 1.0, C6 = 1.0, Cg = 0.0, s = 0.5, b = 0.25;
  const double sigma_max = (2.0 * nu - 4.0 * Cg * std::sqrt(C6) * (il + 1.0)) / (il + a2);
  const double eta1 = (2.0 * nu - s * il - a2 * s - (b + 4.0 * Cg * std::sqrt(C6)) * (il + 1.0)) / a2;
  o.require(w0.Cg == 0.0, "C_g = 0");
  o.require(std::abs(w0.sigma_max - 1.0) <= 1e-12 && std::abs(w0.sigma_max - sigma_max) <= 1e-12, "sigma_max = 1");
  o.require(std::abs(w0.eta1 - 0.5) <= 1e-12 && std::abs(w0.eta1 - eta1) <= 1e-12, "eta1 = 0.5");
  o.require(w0.feasible, "window feasible");
  o.note("sigma_max " + fmt("%.15g", w0.sigma_max) + ", eta1 " + fmt("%.15g", w0.eta1));
  return o;
}

// ------------------------------------------------------------------ 5

Outcome decay_certificate() {
  Outcome o;
  int runs = 0;
  double worst = INFINITY;
  struct Case {
    int dim, n;
    double gain, sigma, beta;
  };
  const std::vector<Case> cases = {{2, 32, 0.0, 0.1, 0.1},  {2, 32, 0.05, 0.5, 0.1}, {2, 32, 0.1, 0.1, 0.1},
                                   {2, 32, -0.08, 0.2, 0.1}, {3, 8, 0.1, 0.1, 0.1},  {3, 8, 0.0, 0.5, 0.2}};
  for (const auto& c : cases) {
    Grid g(c.dim, c.n);
    const Problem p = periodic_problem(g, c.gain, true);
    const HypothesisWindow w = check_hypotheses(params_for(g, 0.5), p.delay, HypothesisInputs{c.sigma, c.beta, std::nullopt});
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const ProcessState s0 = make_constant_state(
          0, 0.01, 50, make_field_ptr(random_field(g, seed, 1.0, 0.5 * static_cast<double>(seed - 10))));
      const Run r = evolve(s0, steps_for(5.0, 0.01), p, StepperConfig{0.01, Scheme::ImexCnab2});  // 10 h
      const BoundCertificate d = certify_decay(r, w), wi = certify_window_integral(r, w);
      o.require(d.verdict == Verdict::Pass && d.min_margin >= 0.0, "decay on run " + std::to_string(runs));
      o.require(wi.verdict == Verdict::Pass && wi.min_margin >= 0.0, "window on run " + std::to_string(runs));
      worst = std::min({worst, d.min_margin, wi.min_margin});
      ++runs;
    }
  }
  Grid g(2, 32);
  const Problem p = periodic_problem(g, 0.1, true);
  Problem pz = p;
  pz.forcing = ForcingSpec{};
  const HypothesisWindow w = check_hypotheses(params_for(g, 0.5), pz.delay, HypothesisInputs{0.1, 0.1, std::nullopt});
  const Run z = evolve(make_constant_state(0, 0.01, 50, make_field_ptr(SpectralField(g))), 500, pz,
                       StepperConfig{0.01, Scheme::ImexCnab2});
  const BoundCertificate zd = certify_decay(z, w), zw = certify_window_integral(z, w);
  o.require(zd.verdict == Verdict::Pass && zd.min_margin == 0.0, "zero run decay margin 0");
  o.require(zw.verdict == Verdict::Pass && zw.min_margin == 0.0, "zero run window margin 0");
  o.note(std::to_string(runs) + " runs, smallest margin " + fmt("%.3e", worst) + "; zero run margins " +
         fmt("%g", zd.min_margin) + ", " + fmt("%g", zw.min_margin));
  return o;
}

// ------------------------------------------------------- 6 and 7 fixture

struct AttractorFixture {
  Grid g{2, 32};
  Problem p;
  HypothesisWindow w;
  StepperConfig cfg{0.01, Scheme::ImexCnab2};
  std::vector<FieldPtr> family;
  std::vector<double> ev2_init;
  std::vector<double> depths = {1, 2, 4, 8, 16, 32};
  double r1 = 0.0;
  // runs[d][m]: member m pulled back from t* = 0 by depths[d]
  std::vector<std::vector<Run>> runs;

  AttractorFixture() {
    p = periodic_problem(g, 0.05, true);
    w = check_hypotheses(params_for(g, 0.5), p.delay, HypothesisInputs{0.5, 0.1, std::nullopt});
    for (int m = 0; m < 5; ++m) {
      const double target = 0.1 * std::pow(10.0, 0.5 * m);  // E_V^2 from 0.1 to 10
      // constant history over h: E_V^2 = (1 + h) |grad u|^2
      family.push_back(make_field_ptr(random_field(g, 500 + static_cast<std::uint64_t>(m), 1.0, std::sqrt(target / 1.5))));
    }
    r1 = absorbing_radius_sq(p.forcing, w, 0.0);
    runs.resize(depths.size());
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t d = 0; d < depths.size(); ++d) {
      runs[d].resize(family.size());
      for (std::size_t m = 0; m < family.size(); ++m) jobs.emplace_back(d, m);
    }
    const long long nj = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long j = 0; j < nj; ++j) {
      const auto [d, m] = jobs[static_cast<std::size_t>(j)];
      const ProcessState s0 = make_constant_state(-steps_for(depths[d], cfg.dt), cfg.dt, 50, family[m]);
      runs[d][m] = evolve(s0, 0, p, cfg);
    }
    for (const auto& fm : family) ev2_init.push_back(ev2_norm_sq(make_constant_state(0, cfg.dt, 50, fm)));
  }

  bool deep(std::size_t d, std::size_t m) const {
    return std::exp(-w.sigma * depths[d]) * ev2_init[m] < 1e-3 * r1;
  }
};

Outcome absorbing_entry(const AttractorFixture& fx) {
  Outcome o;
  o.require(fx.ev2_init.front() >= 0.1 * (1 - 1e-12) && fx.ev2_init.back() <= 10.0 * (1 + 1e-12),
            "family spans [0.1, 10]");
  int checked = 0, inside = 0, beyond_inconclusive = 0;
  std::vector<const Run*> all;
  for (std::size_t d = 0; d < fx.depths.size(); ++d)
    for (std::size_t m = 0; m < fx.family.size(); ++m) all.push_back(&fx.runs[d][m]);
  const BoundCertificate c = certify_absorbing(all, fx.w);
  double worst_ratio = 0.0;
  for (std::size_t d = 0, k = 0; d < fx.depths.size(); ++d)
    for (std::size_t m = 0; m < fx.family.size(); ++m, ++k) {
      if (!fx.deep(d, m)) continue;
      ++checked;
      const double e = ev2_norm_sq(fx.runs[d][m].final);
      worst_ratio = std::max(worst_ratio, e / fx.r1);
      if (e <= fx.r1) ++inside;
      if (c.sample_verdicts.at(k) == Verdict::Inconclusive) ++beyond_inconclusive;
      o.require(c.sample_verdicts.at(k) == Verdict::Pass, "certificate sample " + std::to_string(k));
    }
  for (std::size_t m = 0; m < fx.family.size(); ++m)
    o.require(fx.deep(fx.depths.size() - 1, m), "deepest tau past the entry depth for member " + std::to_string(m));
  o.require(checked > 0 && inside == checked, "endpoints inside the R1 ball");
  o.require(beyond_inconclusive == 0, "no inconclusive verdict past the entry depth");
  o.require(c.verdict != Verdict::Fail, "no failing sample");
  o.note("R1^2(t*) " + fmt("%.4g", fx.r1) + ", " + std::to_string(inside) + "/" + std::to_string(checked) +
         " deep endpoints inside, max |U|^2/R1^2 " + fmt("%.3g", worst_ratio));
  return o;
}

Outcome contraction(const AttractorFixture& fx) {
  Outcome o;
  // psi certificate on random pairs pulled back together
  const std::int64_t tau = -steps_for(8.0, fx.cfg.dt);
  EvolveOptions keep;
  keep.store_fields = true;
  int certs = 0;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {2, 4}, {0, 4}}) {
    const Run a = evolve(make_constant_state(tau, fx.cfg.dt, 50, fx.family[static_cast<std::size_t>(i)]), 0, fx.p, fx.cfg, keep);
    const Run b = evolve(make_constant_state(tau, fx.cfg.dt, 50, fx.family[static_cast<std::size_t>(j)]), 0, fx.p, fx.cfg, keep);
    const ContractionResult cr = contraction_psi(a, b, fx.w);
    o.require(cr.certificate.verdict == Verdict::Pass, "contraction certificate pair " + std::to_string(i) + "-" + std::to_string(j));
    ++certs;
  }
  // pairwise distance at t* as tau recedes past the absorbing depth
  int monotone_checks = 0;
  double worst_increase = -INFINITY;
  for (std::size_t i = 0; i < fx.family.size(); ++i)
    for (std::size_t j = i + 1; j < fx.family.size(); ++j) {
      double prev = INFINITY;
      for (std::size_t d = 0; d < fx.depths.size(); ++d) {
        if (!(fx.deep(d, i) && fx.deep(d, j))) continue;
        const double dist = std::sqrt(ev2_distance_sq(fx.runs[d][i].final, fx.runs[d][j].final));
        if (prev < INFINITY) {
          worst_increase = std::max(worst_increase, dist - prev);
          o.require(dist <= prev + 1e-6, "monotone distance for pair " + std::to_string(i) + "-" + std::to_string(j));
          ++monotone_checks;
        }
        prev = dist;
      }
    }
  o.require(monotone_checks > 0, "at least one depth step past the absorbing depth");
  o.note(std::to_string(certs) + " pair certificates pass; " + std::to_string(monotone_checks) +
         " depth steps, largest change " + fmt("%.3e", worst_increase));
  return o;
}

// ------------------------------------------------------------------ 8

Outcome pullback_collapse() {
  Outcome o;
  Grid g(2, 32);
  Problem p;
  p.delay.h = 0.5;  // kappa = 0, f = 0
  // sigma close to the sharp rate 2 nu lambda1 / (1 + alpha^2 lambda1) of the slowest mode
  const HypothesisWindow w = check_hypotheses(params_for(g, 0.5), p.delay, HypothesisInputs{0.998, 0.001, std::nullopt});
  std::vector<InitialDatum> fam;
  for (int m = 0; m < 5; ++m)
    fam.push_back({"m" + std::to_string(m),
                   make_field_ptr(random_field(g, 900 + static_cast<std::uint64_t>(m), 1.0, 0.3 + 0.5 * m)), nullptr});
  // the schedule starts past the transient of the faster modes
  const std::vector<double> depths = {8, 16, 32, 64, 128};
  std::vector<double> taus;
  for (double d : depths) taus.push_back(-d);
  const SweepResult sw = pullback_sweep(0.0, taus, fam, p, StepperConfig{0.01, Scheme::ImexCnab2});
  const StateCloud zero = zero_cloud(g, 0, 0.01, 50);
  std::vector<double> dz;
  for (const auto& c : sw.clouds) dz.push_back(semidistance(c, zero));
  std::string ratios;
  for (std::size_t n = 1; n < depths.size(); ++n) {
    const double observed = (dz[n] * dz[n]) / (dz[0] * dz[0]);
    const double predicted = std::exp(-w.sigma * (depths[n] - depths[0]));
    const double q = observed / predicted;
    o.require(q >= 0.5 && q <= 2.0, "factor 2 at depth " + fmt("%g", depths[n]));
    ratios += (ratios.empty() ? "" : " ") + fmt("%.3f", q);
  }
  o.note("sigma " + fmt("%g", w.sigma) + ", d^2 ratio / e^{-sigma dD} = " + ratios + ", d(128) " + fmt("%.2e", dz.back()));
  return o;
}

// ------------------------------------------------------------------ 9

Outcome regularity() {
  Outcome o;
  Grid g(2, 32);
  double gap_linear = 0.0;
  double worst_w = INFINITY, worst_v = INFINITY;
  for (bool conv : {false, true}) {
    const Problem p = periodic_problem(g, 0.05, conv);
    const HypothesisWindow w = check_hypotheses(params_for(g, 0.5), p.delay, HypothesisInputs{0.5, 0.1, std::nullopt});
    EvolveOptions keep;
    keep.store_fields = true;
    for (std::uint64_t seed : {21u, 22u}) {
      const ProcessState s0 = make_constant_state(-400, 0.01, 50, make_field_ptr(random_field(g, seed, 1.0, 1.5)));
      const Run parent = evolve(s0, 0, p, StepperConfig{0.01, Scheme::ImexCnab2}, keep);
      const RegularitySplit sp = regularity_split(parent, 0.05, w);
      if (!conv) {
        gap_linear = std::max(gap_linear, sp.additivity_gap);
        o.require(sp.additivity_gap <= 1e-10, "v + w = u on the linear fixture");
      } else {
        o.require(sp.w_bound.verdict == Verdict::Pass, "|Aw|^2 below its bound");
        o.require(sp.v_bound.verdict == Verdict::Pass, "|Av|^2 below its bound");
        worst_w = std::min(worst_w, sp.w_bound.min_margin);
        worst_v = std::min(worst_v, sp.v_bound.min_margin);
        o.require(sp.w_bound.lhs.size() == parent.energy.size(), "bound checked at every output time");
      }
    }
  }
  o.note("linear additivity gap " + fmt("%.2e", gap_linear) + "; nonlinear min margins w " + fmt("%.3e", worst_w) +
         ", v " + fmt("%.3e", worst_v));
  return o;
}

// ------------------------------------------------------------------ 10

Outcome measures() {
  Outcome o;
  Grid g(2, 32);
  // contracting linear fixture: no convection, nu = 2
  Problem p = periodic_problem(g, 0.05, false);
  p.nu = 2.0;
  PhysicalParams pp = params_for(g, 0.5);
  pp.nu = 2.0;
  const HypothesisWindow w = check_hypotheses(pp, p.delay, HypothesisInputs{0.5, 0.1, std::nullopt});
  const StepperConfig cfg{0.01, Scheme::ImexCnab2};
  const StateFamily rho = constant_family(make_field_ptr(random_field(g, 31, 1.0, 1.0)), cfg.dt, 50);
  PushforwardCache cache(p, cfg, rho);
  const std::vector<Functional> phis = {functionals::one(), functionals::energy(), functionals::enstrophy(),
                                        functionals::mode_projection(g, {1, 0, 0}, 1),
                                        functionals::mode_projection(g, {1, 1, 0}, 0)};
  const std::int64_t t = 0, tau = -steps_for(0.5, cfg.dt), stride = 10;
  const DepthSweep sw = depth_doubling(cache, tau, t, 2.0, 3, stride, phis);
  for (const auto& row : sw.rows) {
    o.require(row.value[0] == 1.0, "Phi = 1 averages to exactly 1");
    o.require(row.residual[0] == 0.0, "Phi = 1 residual exactly 0");
  }
  double worst_extrap = 0.0;
  for (std::size_t i = 1; i < phis.size(); ++i) {
    for (std::size_t k = 1; k < sw.rows.size(); ++k)
      o.require(sw.rows[k].residual[i] < sw.rows[k - 1].residual[i], "residual of " + phis[i].id + " decreases");
    worst_extrap = std::max(worst_extrap, sw.rows.back().extrapolated[i]);
  }
  o.require(worst_extrap < 1e-4, "extrapolated residual < 1e-4");

  const EmpiricalMeasure mu = build_measure(cache, t, t - steps_for(sw.rows.back().depth, cfg.dt), stride);
  const BoundCertificate sup = certify_support(mu, rho, p.forcing, w);
  int deep = 0;
  for (auto v : sup.sample_verdicts) {
    deep += v != Verdict::Inconclusive;
    o.require(v != Verdict::Fail, "deep sample inside R1");
  }
  o.require(deep > 0, "deep samples present");
  o.require(sup.verdict == Verdict::Pass, "support certificate");
  std::string first, last;
  for (std::size_t i = 1; i < phis.size(); ++i) {
    first += (first.empty() ? "" : " ") + fmt("%.2e", sw.rows.front().residual[i]);
    last += (last.empty() ? "" : " ") + fmt("%.2e", sw.rows.back().residual[i]);
  }
  std::string ex;
  for (std::size_t i = 1; i < phis.size(); ++i) ex += (ex.empty() ? "" : " ") + fmt("%.2e", sw.rows.back().extrapolated[i]);
  o.note("residuals D=2: " + first + " -> D=16: " + last + "; extrapolated " + ex + "; " +
         std::to_string(deep) + " deep samples inside R1");
  return o;
}

// ------------------------------------------------------------------ 11

std::map<std::string, std::string> snapshot_dir(const fs::path& d) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(d))
    if (e.is_regular_file()) out[e.path().filename().string()] = read_file(e.path().string());
  return out;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "nsv_acceptance_c11";
  fs::remove_all(dir);
  fs::create_directories(dir);
  nlohmann::json cfg = nlohmann::json::parse(R"({
    "grid": {"dim": 2, "n": 32},
    "physics": {"nu": 1.0, "alpha": 1.0, "h": 0.5},
    "stepper": {"dt": 0.01, "t_end": 5.0},
    "delay": {"kind": "discrete", "gain": 0.1},
    "forcing": {"kind": "periodic", "amplitude": {"type": "random", "seed": 9, "v_norm": 1.0}, "a1": 0.5, "omega": 1.0},
    "hypotheses": {"sigma": 0.1, "beta": 0.1},
    "initial": {"type": "random", "seed": 3, "v_norm": 1.0}
  })");
  cfg["output"]["dir"] = (dir / "run").string();
  write_file_atomic((dir / "config.json").string(), cfg.dump(2));
  CommandOptions opt;
  opt.config_path = (dir / "config.json").string();
  std::ostringstream sink;
  const int saved = omp_get_max_threads();

  omp_set_num_threads(1);
  const int c1 = run_command("simulate", opt, sink, sink);
  const auto first = snapshot_dir(dir / "run");
  omp_set_num_threads(std::max(2, saved));
  const int c2 = run_command("simulate", opt, sink, sink);
  const auto second = snapshot_dir(dir / "run");
  omp_set_num_threads(saved);
  o.require(c1 == c2, "same exit code");
  o.require(!first.empty() && first == second, "byte-identical rerun (1 vs " + std::to_string(std::max(2, saved)) + " threads)");

  CommandOptions rep;
  rep.run_dir = (dir / "run").string();
  o.require(run_command("replay", rep, sink, sink) == kExitPass, "replay from the initial checkpoint");

  const std::string bytes = read_file((dir / "run" / "final.nsvc").string());
  const Checkpoint ck = decode_checkpoint(bytes);
  o.require(encode_checkpoint(ck.state, ck.manifest_hash) == bytes, "checkpoint decode/encode round trip");
  // restart from a mid-run checkpoint
  const Checkpoint init = load_checkpoint((dir / "run" / "initial.nsvc").string());
  const RunConfig rc = load_config(opt.config_path);
  const Grid g = make_grid(rc);
  const Problem p = make_problem(rc, g);
  const StepperConfig sc = make_stepper(rc);
  const ProcessState mid = evolve_state(init.state, 217, p, sc);
  const ProcessState resumed = decode_checkpoint(encode_checkpoint(mid, 0)).state;
  o.require(encode_checkpoint(evolve_state(resumed, ck.state.step, p, sc), ck.manifest_hash) == bytes,
            "restart from a mid-run checkpoint");
  o.note(std::to_string(first.size()) + " artifacts byte-identical; checkpoints bit-exact");
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::unique_ptr<AttractorFixture> fx;
  auto fixture = [&]() -> const AttractorFixture& {
    if (!fx) fx = std::make_unique<AttractorFixture>();
    return *fx;
  };
  const std::vector<Criterion> criteria = {
      {1, "operator identities", operator_identities},
      {2, "linear oracle", linear_oracle},
      {3, "process axioms", process_axioms},
      {4, "hypothesis windows", hypothesis_windows},
      {5, "decay certificate", decay_certificate},
      {6, "absorbing entry", [&] { return absorbing_entry(fixture()); }},
      {7, "contraction", [&] { return contraction(fixture()); }},
      {8, "pullback collapse", pullback_collapse},
      {9, "regularity", regularity},
      {10, "invariant measures", measures},
      {11, "determinism and persistence", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-28s (%5.1fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
