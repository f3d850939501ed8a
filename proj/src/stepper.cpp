#include "nsv/stepper.hpp"

#include <cmath>
#include <string>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

namespace {
constexpr double kBlowUp = 1e12;
}

const char* scheme_name(Scheme s) {
  return s == Scheme::ImexEuler ? "imex_euler" : "imex_cnab2";
}

std::int64_t steps_for(double duration, double dt) {
  const double r = duration / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(n)))
    throw ConfigError("duration " + std::to_string(duration) + " is not a multiple of dt");
  return static_cast<std::int64_t>(n);
}

double mass_energy(const SpectralField& u, double alpha) {
  return norm_sq(u, Space::H) + alpha * alpha * norm_sq(u, Space::V);
}

SpectralField ExplicitPieces::total() const {
  SpectralField e = forcing;
  e += delay;
  e += extra;
  e -= convection;
  return e;
}

ExplicitPieces explicit_pieces(const ProcessState& s, const Problem& p) {
  const Grid& g = s.grid();
  const double t = s.time();
  ExplicitPieces x{SpectralField(g), SpectralField(g), SpectralField(g), SpectralField(g)};
  if (p.forcing.kind != ForcingKind::Zero) x.forcing = p.forcing.at(t, g);
  if (p.self_delay && p.delay.gain != 0.0) x.delay = delay_g(p.delay, t, s.history);
  if (p.extra) x.extra = p.extra(s.step);
  if (p.convection) x.convection = nonlinear_B(*s.u);
  return x;
}

ProcessState step(const ProcessState& s, const Problem& p, const StepperConfig& cfg,
                  StepBudget* budget) {
  if (cfg.dt != s.dt) throw ConfigError("step: stepper dt differs from state dt");
  const Grid& g = s.grid();
  const double t = s.time();
  const double dt = s.dt;
  const double a2 = p.alpha * p.alpha;

  const ExplicitPieces x = explicit_pieces(s, p);
  SpectralField e = x.total();

  const auto layout = layout_of(g);
  std::vector<Complex> out(g.num_coeffs());
  const bool multistep = cfg.scheme == Scheme::ImexCnab2 && s.explicit_prev;
  if (multistep) {
    kernels::omp::imex_cnab2(layout, s.u->coeffs(), e.coeffs(), s.explicit_prev->coeffs(), out,
                             a2, p.nu, dt);
  } else {
    kernels::omp::imex_euler(layout, s.u->coeffs(), e.coeffs(), out, a2, p.nu, dt);
  }
  SpectralField next(g, std::move(out));
  if (!next.all_finite() || next.max_abs() > kBlowUp) {
    throw BlowUpError(t + dt, "blow-up detected at t = " + std::to_string(t + dt));
  }

  if (budget) {
    StepBudget bd;
    bd.t = t;
    bd.mass_change = 0.5 * (mass_energy(next, p.alpha) - mass_energy(*s.u, p.alpha));
    const SpectralField z = multistep ? lerp(*s.u, next, 0.5) : next;
    const double w = multistep ? 1.5 * dt : dt;
    bd.dissipation = dt * p.nu * norm_sq(z, Space::V);
    if (!multistep) bd.splitting = 0.5 * mass_energy(next - *s.u, p.alpha);
    bd.work_f = w * inner(x.forcing, z, Space::H);
    bd.work_g = w * inner(x.delay, z, Space::H);
    bd.work_extra = w * inner(x.extra, z, Space::H);
    bd.work_B = w * inner(x.convection, z, Space::H);
    if (multistep) bd.work_memory = -0.5 * dt * inner(*s.explicit_prev, z, Space::H);
    bd.residual = bd.mass_change + bd.dissipation + bd.splitting -
                  (bd.work_f + bd.work_g + bd.work_extra - bd.work_B + bd.work_memory);
    *budget = bd;
  }

  ProcessState ns;
  ns.step = s.step + 1;
  ns.dt = dt;
  ns.u = make_field_ptr(std::move(next));
  ns.history = s.history;
  ns.history.push(ns.u);
  ns.explicit_prev = cfg.scheme == Scheme::ImexCnab2 ? make_field_ptr(std::move(e)) : nullptr;
  return ns;
}

}  // namespace nsv
