#include <doctest.h>

#include <cmath>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "nsv/run.hpp"
#include "oracles/oracles.hpp"

using namespace nsv;

namespace {

Problem shear_problem(double nu, double alpha, double gain, double h) {
  Problem p;
  p.nu = nu;
  p.alpha = alpha;
  p.delay.h = h;
  p.delay.gain = gain;
  return p;
}

/// Relative terminal error of the shear amplitude against `exact`.
double shear_error(const Grid& g, const Problem& p, Scheme scheme, double dt, double T, double exact) {
  const int nh = static_cast<int>(steps_for(p.delay.h, dt));
  FieldPtr u0 = make_field_ptr(shear_field(g, 1.0, 1));
  ProcessState s = make_constant_state(0, dt, nh, u0);
  ProcessState e = evolve_state(s, steps_for(T, dt), p, StepperConfig{dt, scheme});
  const double a = 2.0 * e.u->coeff(g.index_of({0, 1, 0}), 0).real();
  return std::abs(a - exact) / std::abs(exact);
}

}  // namespace

TEST_CASE("shear mode decays like the exact exponential, second order") {
  Grid g(2, 16);
  const double nu = 1.0, alpha = 1.0, T = 1.0;
  const Problem p = shear_problem(nu, alpha, 0.0, 0.5);
  const double exact = std::exp(-nu * T / (1.0 + alpha * alpha));
  const double e1 = shear_error(g, p, Scheme::ImexCnab2, 1e-3, T, exact);
  const double e2 = shear_error(g, p, Scheme::ImexCnab2, 5e-4, T, exact);
  CHECK(e1 <= 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  // the one-step scheme is first order
  const double f1 = shear_error(g, p, Scheme::ImexEuler, 1e-3, T, exact);
  const double f2 = shear_error(g, p, Scheme::ImexEuler, 5e-4, T, exact);
  CHECK(f1 / f2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("shear mode with a discrete delay matches the scalar delay equation") {
  Grid g(2, 16);
  const double nu = 1.0, alpha = 1.0, h = 0.5, kappa = 0.1, T = 2.0;
  const Problem p = shear_problem(nu, alpha, kappa, h);
  const double ref = oracle::scalar_dde(1.0 + alpha * alpha, nu, kappa, h, 1.0, T, 4000);
  const double e1 = shear_error(g, p, Scheme::ImexCnab2, 1e-3, T, ref);
  const double e2 = shear_error(g, p, Scheme::ImexCnab2, 5e-4, T, ref);
  CHECK(e1 <= 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("scalar delay oracle reproduces the exponential when kappa = 0") {
  const double a = oracle::scalar_dde(2.0, 1.0, 0.0, 0.5, 1.0, 3.0, 200);
  CHECK(a == doctest::Approx(std::exp(-1.5)).epsilon(1e-10));
}

TEST_CASE("process identity and cocycle are bit-exact") {
  Grid g(2, 16);
  Problem p = shear_problem(0.5, 0.7, 0.2, 0.25);
  p.forcing.kind = ForcingKind::Periodic;
  p.forcing.amplitude = make_field_ptr(random_field(g, 4, 2.0, 1.0));
  p.forcing.a1 = 0.5;
  p.forcing.omega = 2.0;
  const double dt = 0.01;
  for (Scheme sc : {Scheme::ImexCnab2, Scheme::ImexEuler}) {
    const StepperConfig cfg{dt, sc};
    ProcessState s0 = make_constant_state(-100, dt, 25, make_field_ptr(random_field(g, 9, 1.0, 2.0)));
    ProcessState same = evolve_state(s0, s0.step, p, cfg);
    CHECK(*same.u == *s0.u);
    CHECK(same.step == s0.step);
    ProcessState direct = evolve_state(s0, 150, p, cfg);
    ProcessState mid = evolve_state(s0, 37, p, cfg);
    ProcessState composed = evolve_state(mid, 150, p, cfg);
    CHECK(*direct.u == *composed.u);
    for (std::size_t j = 0; j < direct.history.size(); ++j) CHECK(*direct.history.slot(j) == *composed.history.slot(j));
  }
}

TEST_CASE("discrete energy identity closes for both schemes") {
  Grid g(2, 16);
  Problem p = shear_problem(0.3, 0.8, 0.25, 0.2);
  p.delay.map = PointwiseMap::Tanh;
  p.forcing.kind = ForcingKind::Constant;
  p.forcing.amplitude = make_field_ptr(random_field(g, 5, 2.0, 1.0));
  for (Scheme sc : {Scheme::ImexCnab2, Scheme::ImexEuler}) {
    ProcessState s0 = make_constant_state(0, 0.01, 20, make_field_ptr(random_field(g, 8, 1.0, 3.0)));
    EvolveOptions opt;
    opt.record_budget = true;
    Run r = evolve(s0, 200, p, StepperConfig{0.01, sc}, opt);
    REQUIRE(r.budget.size() == 200);
    double worst = 0.0;
    for (const auto& b : r.budget) {
      const double scale = std::abs(b.mass_change) + b.dissipation + std::abs(b.work_B) + std::abs(b.work_f) + 1e-300;
      worst = std::max(worst, std::abs(b.residual) / scale);
    }
    CHECK(worst < 1e-11);
  }
}

TEST_CASE("zero state stays exactly zero") {
  Grid g(3, 8);
  Problem p = shear_problem(1.0, 1.0, 0.3, 0.1);
  ProcessState s0 = make_constant_state(0, 0.01, 10, make_field_ptr(SpectralField(g)));
  Run r = evolve(s0, 50, p, StepperConfig{0.01, Scheme::ImexCnab2});
  for (const auto& e : r.energy) {
    CHECK(e.h2 == 0.0);
    CHECK(e.v2 == 0.0);
    CHECK(e.a2 == 0.0);
    CHECK(e.dtv2 == 0.0);
  }
}

TEST_CASE("unforced linear runs dissipate the mass energy") {
  Grid g(2, 16);
  Problem p = shear_problem(0.2, 0.5, 0.0, 0.1);
  p.convection = false;  // the extrapolated convection work is not exactly zero
  ProcessState s0 = make_constant_state(0, 0.01, 10, make_field_ptr(random_field(g, 21, 1.0, 3.0)));
  Run r = evolve(s0, 300, p, StepperConfig{0.01, Scheme::ImexCnab2});
  for (std::size_t i = 1; i < r.energy.size(); ++i) {
    const double m0 = r.energy[i - 1].h2 + 0.25 * r.energy[i - 1].v2;
    const double m1 = r.energy[i].h2 + 0.25 * r.energy[i].v2;
    CHECK(m1 <= m0 * (1.0 + 1e-12));
  }
}

TEST_CASE("fields stay divergence free and real") {
  Grid g(3, 8);
  Problem p = shear_problem(0.1, 0.5, 0.2, 0.1);
  p.delay.map = PointwiseMap::Tanh;
  ProcessState s = make_constant_state(0, 0.01, 10, make_field_ptr(random_field(g, 2, 0.5, 4.0)));
  s = evolve_state(s, 100, p, StepperConfig{0.01, Scheme::ImexCnab2});
  CHECK(divergence_residual(*s.u) < 1e-12);
  CHECK(conjugate_symmetry_residual(*s.u) < 1e-14);
}

TEST_CASE("blow-up is detected") {
  Grid g(2, 8);
  Problem p = shear_problem(0.01, 1.0, 1e4, 0.1);
  ProcessState s = make_constant_state(0, 0.01, 10, make_field_ptr(random_field(g, 1, 1.0, 1.0)));
  CHECK_THROWS_AS(evolve_state(s, 1000, p, StepperConfig{0.01, Scheme::ImexCnab2}), BlowUpError);
}

TEST_CASE("time lattice checks") {
  CHECK(steps_for(1.0, 0.01) == 100);
  CHECK(steps_for(-0.5, 0.01) == -50);
  CHECK_THROWS_AS(steps_for(1.0, 0.3), ConfigError);
  Grid g(2, 8);
  Problem p = shear_problem(1.0, 1.0, 0.0, 0.1);
  ProcessState s = make_constant_state(5, 0.01, 10, make_field_ptr(SpectralField(g)));
  CHECK_THROWS_AS(evolve(s, 4, p, StepperConfig{0.01, Scheme::ImexCnab2}), ConfigError);
  CHECK_THROWS_AS(step(s, p, StepperConfig{0.02, Scheme::ImexCnab2}), ConfigError);
}
