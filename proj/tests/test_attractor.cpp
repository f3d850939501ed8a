#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "nsv/attractor.hpp"
#include "nsv/errors.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "oracles/oracles.hpp"

using namespace nsv;

namespace {

PhysicalParams unit_params() {
  PhysicalParams p;
  p.h = 0.5;
  p.emb = default_embedding_constants(Grid(2, 16), 1.0);
  return p;
}

Problem forced(const Grid& g, double gain, bool convection = true) {
  Problem p;
  p.delay.h = 0.5;
  p.delay.gain = gain;
  p.convection = convection;
  p.forcing.kind = ForcingKind::Periodic;
  SpectralField f = random_field(g, 31, 1.0, 1.0);
  f += shear_field(g, 0.5, 3);
  p.forcing.amplitude = make_field_ptr(f);
  p.forcing.a1 = 0.3;
  p.forcing.omega = 2.0;
  return p;
}

std::vector<InitialDatum> family(const Grid& g, int n) {
  std::vector<InitialDatum> f;
  for (int i = 0; i < n; ++i)
    f.push_back({"m" + std::to_string(i), make_field_ptr(random_field(g, 50 + static_cast<std::uint64_t>(i), 1.0, 0.5 + i)),
                 nullptr});
  return f;
}

}  // namespace

TEST_CASE("semidistance matches brute force") {
  Grid g(2, 8);
  StateCloud a, b;
  a.dt = b.dt = 0.1;
  std::vector<ProcessState> va, vb;
  for (int i = 0; i < 4; ++i) {
    ProcessState s = make_constant_state(0, 0.1, 3, make_field_ptr(random_field(g, 10 + static_cast<std::uint64_t>(i))));
    a.members.push_back({s, 0, "a"});
    va.push_back(s);
  }
  for (int i = 0; i < 3; ++i) {
    std::vector<FieldPtr> slots;
    for (int j = 0; j < 4; ++j) slots.push_back(make_field_ptr(random_field(g, 100 + static_cast<std::uint64_t>(4 * i + j))));
    ProcessState s = make_state(0, 0.1, slots.back(), HistorySegment(0.1, 3, slots));
    b.members.push_back({s, 0, "b"});
    vb.push_back(s);
  }
  CHECK(semidistance(a, b) == doctest::Approx(oracle::semidistance(va, vb)).epsilon(1e-13));
  CHECK(semidistance(b, a) == doctest::Approx(oracle::semidistance(vb, va)).epsilon(1e-13));
  CHECK(semidistance(a, a) == 0.0);
  StateCloud empty;
  CHECK_THROWS_AS(semidistance(a, empty), DomainError);
}

TEST_CASE("pullback sweep equals direct evolution and ignores the thread count") {
  Grid g(2, 16);
  const Problem p = forced(g, 0.1);
  const StepperConfig cfg{0.01, Scheme::ImexCnab2};
  const auto fam = family(g, 3);
  const std::vector<double> taus = {-1.0, -2.0, -4.0};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  SweepResult s1 = pullback_sweep(0.0, taus, fam, p, cfg);
  omp_set_num_threads(3);
  SweepResult s3 = pullback_sweep(0.0, taus, fam, p, cfg);
  omp_set_num_threads(saved);
  for (std::size_t t = 0; t < taus.size(); ++t)
    for (std::size_t m = 0; m < fam.size(); ++m)
      CHECK(*s1.clouds[t].members[m].state.u == *s3.clouds[t].members[m].state.u);
  CHECK(s1.d == s3.d);
  ProcessState direct = evolve_state(make_constant_state(-200, 0.01, 50, fam[1].u0), 0, p, cfg);
  CHECK(*direct.u == *s1.clouds[1].members[1].state.u);
  CHECK(s1.d.back() == 0.0);
  CHECK_THROWS_AS(pullback_sweep(0.0, {-1.0, -0.5}, fam, p, cfg), ConfigError);
}

TEST_CASE("forcing truncation is the smallest admissible shell") {
  Grid g(2, 16);
  const Problem p = forced(g, 0.0);
  for (double xi : {0.5, 0.1, 0.01}) {
    int K = 0;
    double rh = 0, rv = 0;
    ForcingSpec ft = truncate_forcing(p.forcing, xi, &K, &rh, &rv);
    CHECK(rh < xi);
    CHECK(rv < xi);
    // direct residuals of the truncated amplitude
    const double sup = p.forcing.profile_sup();
    SpectralField rest = *p.forcing.amplitude;
    if (ft.amplitude) rest -= *ft.amplitude;
    CHECK(sup * norm(rest, Space::H) == doctest::Approx(rh).epsilon(1e-12));
    if (K > 0) {
      // shell K - 1 is not enough
      SpectralField smaller = *p.forcing.amplitude;
      for (std::size_t m = 0; m < g.num_modes(); ++m) {
        const IntVec v = g.mode(m);
        if (v[0] * v[0] + v[1] * v[1] > K - 1)
          for (int c = 0; c < 2; ++c) smaller.coeffs_mut()[m * 2 + static_cast<std::size_t>(c)] = 0.0;
      }
      SpectralField tail = *p.forcing.amplitude - smaller;
      CHECK(std::max(sup * norm(tail, Space::H), sup * norm(tail, Space::Vdual)) >= xi);
    }
  }
  CHECK_THROWS_AS(truncate_forcing(p.forcing, 0.0), ConfigError);
}

TEST_CASE("regularity split: exact additivity without convection, certified bounds with it") {
  Grid g(2, 16);
  const PhysicalParams pp = unit_params();
  for (bool conv : {false, true}) {
    const Problem p = forced(g, 0.1, conv);
    HypothesisWindow w = check_hypotheses(pp, p.delay, HypothesisInputs{0.1, 0.1, std::nullopt});
    ProcessState s = make_constant_state(0, 0.01, 50, make_field_ptr(random_field(g, 3, 1.0, 1.5)));
    EvolveOptions o;
    o.store_fields = true;
    Run parent = evolve(s, 400, p, StepperConfig{0.01, Scheme::ImexCnab2}, o);
    RegularitySplit sp = regularity_split(parent, 0.05, w);
    if (!conv) CHECK(sp.additivity_gap < 1e-10);
    CHECK(sp.w_bound.verdict == Verdict::Pass);
    CHECK(sp.v_bound.verdict == Verdict::Pass);
    CHECK(sp.residual_h < 0.05);
  }
}
