#include "nsv/hypotheses.hpp"

#include <cmath>
#include <cstdio>

namespace nsv {

namespace {

std::string violation_message(const HypothesisWindow& w) {
  const HypothesisCondition* c = w.first_violation();
  if (!c) return "hypotheses infeasible";
  char buf[256];
  std::snprintf(buf, sizeof buf, "infeasible: %s violated (%s; value %.6g, bound %.6g)",
                c->id.c_str(), c->description.c_str(), c->value, c->bound);
  return buf;
}

}  // namespace

const HypothesisCondition* HypothesisWindow::first_violation() const {
  for (const auto& c : conditions)
    if (c.fatal && !c.pass) return &c;
  return nullptr;
}

double HypothesisWindow::K0() const {
  return (inv_l1() + alpha2() + 2.0 * Cg * std::sqrt(params.emb.C6)) / alpha2();
}

double HypothesisWindow::K2() const {
  const double C6 = params.emb.C6;
  return 1.0 + inv_l1() / alpha2() +
         Cg * Cg * C6 * (inv_l1() + 1.0) / (alpha2() * (beta + 4.0 * Cg));
}

InfeasibleError::InfeasibleError(HypothesisWindow w)
    : ConfigError(violation_message(w)), window_(std::move(w)) {}

HypothesisWindow evaluate_hypotheses(const PhysicalParams& p, const DelaySpec& spec,
                                     const HypothesisInputs& in) {
  HypothesisWindow w;
  w.params = p;
  w.sigma = in.sigma;
  w.beta = in.beta;
  w.Lg = lipschitz_bound(spec, p.lambda1);
  w.delay_constrained = spec.gain != 0.0;
  const double il = 1.0 / p.lambda1;
  const double a2 = p.alpha * p.alpha;
  const double nu = p.nu;
  const double C6 = p.emb.C6;
  const double sC6 = std::sqrt(C6);
  if (in.cg_override) {
    w.Cg = *in.cg_override;
    w.cg_overridden = true;
  } else {
    w.Cg = w.Lg * std::sqrt(il + 1.0);
  }
  const double Cg = w.Cg, s = in.sigma, b = in.beta;

  const double slack = 2.0 * nu - s * il - a2 * s;  // 2 nu - sigma/lambda1 - alpha^2 sigma
  w.cg_max = slack / ((il + 1.0) * sC6);
  w.sigma_max = (2.0 * nu - 4.0 * Cg * sC6 * (il + 1.0)) / (il + a2);
  w.beta_max = slack / (il + 1.0) - 4.0 * Cg * sC6;
  w.eta1 = (slack - (b + 4.0 * Cg * sC6) * (il + 1.0)) / a2;
  const double b4 = b + 4.0 * Cg;
  const double base2 = slack - b4 * (il + 1.0);
  w.eta2 = (base2 - (b4 > 0.0 ? Cg * Cg * C6 * (il + 1.0) * (il + 1.0) / b4 : 0.0)) / a2;
  w.eta5 = (base2 - 3.0 * p.emb.C2 / 8.0) / a2;
  w.eta6 = (base2 - (3.0 * p.emb.C2 + 2.0) / 8.0 - (b4 > 0.0 ? il / b4 : INFINITY)) / a2;

  auto add = [&](std::string id, std::string desc, double value, double bound, bool pass,
                 bool fatal) {
    w.conditions.push_back(HypothesisCondition{std::move(id), std::move(desc), value, bound, pass, fatal});
  };

  // C_g = 0 is admitted when there is no delay term.
  const bool cg_ok = (w.delay_constrained || w.cg_overridden) ? (Cg > 0.0 && Cg < w.cg_max)
                                                              : (Cg >= 0.0 && Cg < w.cg_max);
  add("H4", "0 < C_g < (2nu - sigma/lambda1 - alpha^2 sigma)/((1/lambda1 + 1) sqrt(C6))", Cg,
      w.cg_max, cg_ok, true);

  // The delay shift in the integral hypothesis costs e^{sigma h} (and the
  // Jacobian of a variable delay); C_g must absorb it.
  const double gl = std::abs(spec.gain) * spec.map_lipschitz() * spec.kernel_mass();
  const double shift = std::exp(s * p.h) * spec.shift_jacobian() * gl * gl * il;
  add("H4-shift", "e^{sigma h} J (|kappa| L_G m)^2 / lambda1 <= C_g^2", shift, Cg * Cg,
      shift <= Cg * Cg * (1.0 + 1e-12), true);

  add("sigma", "0 < sigma < (2nu - 4 C_g sqrt(C6)(1/lambda1 + 1))/(1/lambda1 + alpha^2)", s,
      w.sigma_max, s > 0.0 && s < w.sigma_max, true);
  add("beta", "0 < beta < (2nu - sigma/lambda1 - alpha^2 sigma)/(1/lambda1 + 1) - 4 C_g sqrt(C6)", b, w.beta_max,
      b > 0.0 && b < w.beta_max, true);
  add("eta1", "eta1 > 0", w.eta1, 0.0, w.eta1 > 0.0, true);
  add("eta2", "eta2 > 0", w.eta2, 0.0, w.eta2 > 0.0, true);
  add("eta2<eta1", "eta2 < eta1", w.eta2, w.eta1, w.eta2 < w.eta1, false);
  add("eta5", "eta5 > 0", w.eta5, 0.0, w.eta5 > 0.0, false);
  add("eta6", "eta6 > 0", w.eta6, 0.0, w.eta6 > 0.0, false);
  const double k7 = 4.0 * p.emb.C7 - p.emb.C4 - 2.0;
  add("C7", "4 C7 - C4 - 2 > 0", k7, 0.0, k7 > 0.0, false);

  w.feasible = w.first_violation() == nullptr;
  return w;
}

HypothesisWindow check_hypotheses(const PhysicalParams& p, const DelaySpec& spec,
                                  const HypothesisInputs& in) {
  if (!(p.nu > 0.0 && p.alpha > 0.0 && p.lambda1 > 0.0))
    throw ConfigError("check_hypotheses: nu, alpha and lambda1 must be positive");
  HypothesisWindow w = evaluate_hypotheses(p, spec, in);
  if (!w.feasible) throw InfeasibleError(std::move(w));
  return w;
}

std::string format_window(const HypothesisWindow& w) {
  std::string out;
  char buf[256];
  auto line = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "%-10s %.12g\n", name, v);
    out += buf;
  };
  line("sigma_max", w.sigma_max);
  if (w.delay_constrained || w.cg_overridden) {
    line("cg_max", w.cg_max);
  } else {
    std::snprintf(buf, sizeof buf, "%-10s %.12g (unconstrained by delay: kappa = 0)\n", "cg_max",
                  w.cg_max);
    out += buf;
  }
  line("beta_max", w.beta_max);
  line("sigma", w.sigma);
  line("beta", w.beta);
  line("C_g", w.Cg);
  line("L_g", w.Lg);
  line("eta1", w.eta1);
  line("eta2", w.eta2);
  line("eta5", w.eta5);
  line("eta6", w.eta6);
  out += "conditions:\n";
  for (const auto& c : w.conditions) {
    std::snprintf(buf, sizeof buf, "  %-10s %-5s value %.6g bound %.6g%s\n", c.id.c_str(),
                  c.pass ? "ok" : "FAIL", c.value, c.bound, c.fatal ? "" : " (advisory)");
    out += buf;
  }
  out += w.feasible ? "feasible\n" : "infeasible\n";
  return out;
}

}  // namespace nsv
