#include "nsv/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "nsv/artifacts.hpp"
#include "nsv/attractor.hpp"
#include "nsv/certificates.hpp"
#include "nsv/errors.hpp"
#include "nsv/measure.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "nsv/snapshot.hpp"

namespace nsv {

namespace {

using nlohmann::json;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::uint64_t config_hash(const RunConfig& c) { return fnv1a64(to_json(c).dump()); }

/// Window used by the certificates; records whether the override was taken.
struct WindowResult {
  HypothesisWindow window;
  bool overridden = false;
};

WindowResult window_for(const RunConfig& c, const Grid& g) {
  WindowResult r;
  r.window = make_window(c, g);
  r.overridden = c.override_hypotheses && !r.window.feasible;
  return r;
}

json window_json(const WindowResult& wr) {
  const HypothesisWindow& w = wr.window;
  json j = {{"feasible", w.feasible},    {"override", wr.overridden}, {"sigma", w.sigma},
            {"beta", w.beta},            {"Cg", w.Cg},                {"Lg", w.Lg},
            {"sigma_max", w.sigma_max},  {"beta_max", w.beta_max},    {"eta1", w.eta1},
            {"eta2", w.eta2},            {"eta5", w.eta5},            {"eta6", w.eta6}};
  j["cg_max"] = w.delay_constrained ? json(w.cg_max) : json("unconstrained by delay");
  return j;
}

int exit_for(const std::vector<BoundCertificate>& certs) {
  bool fail = false, inconclusive = false;
  for (const auto& c : certs) {
    fail |= c.verdict == Verdict::Fail;
    inconclusive |= c.verdict == Verdict::Inconclusive;
  }
  return fail ? kExitFail : inconclusive ? kExitInconclusive : kExitPass;
}

BoundCertificate inconclusive(const std::string& id, const std::string& why) {
  BoundCertificate c;
  c.id = id;
  c.verdict = Verdict::Inconclusive;
  c.note = why;
  return c;
}

/// Single-run certificates by id; a run too short for one is inconclusive.
std::vector<BoundCertificate> single_run_certificates(const Run& run, const WindowResult& wr,
                                                      const std::vector<std::string>& ids) {
  std::vector<BoundCertificate> out;
  for (const auto& id : ids) {
    if (wr.overridden) {
      out.push_back(inconclusive(id, "hypothesis window infeasible (override)"));
      continue;
    }
    try {
      if (id == "decay") out.push_back(certify_decay(run, wr.window));
      else if (id == "window") out.push_back(certify_window_integral(run, wr.window));
      else if (id == "deriv-R2") out.push_back(certify_derivative_bound(run, wr.window));
      else if (id == "absorb-R1") out.push_back(certify_absorbing({&run}, wr.window));
      else throw ConfigError("certificate '" + id + "' is not a single-run certificate");
    } catch (const InsufficientDataError& e) {
      out.push_back(inconclusive(id, e.what()));
    }
  }
  return out;
}

json certificates_json(const std::vector<BoundCertificate>& certs) {
  json j = json::array();
  for (const auto& c : certs) j.push_back(certificate_json(c));
  return j;
}

void print_summary(std::ostream& out, const std::vector<BoundCertificate>& certs) {
  out << certificate_table(certs);
  const int code = exit_for(certs);
  out << "overall: " << (code == kExitPass ? "pass" : code == kExitFail ? "fail" : "inconclusive") << '\n';
}

void write_manifest(const std::string& dir, const std::string& name, const std::string& command,
                    const RunConfig& c, const WindowResult& wr,
                    const std::vector<std::pair<std::string, std::string>>& artifacts, json extra = {}) {
  json m;
  m["command"] = command;
  m["config"] = to_json(c);
  m["config_hash"] = hex64(config_hash(c));
  m["hypotheses"] = window_json(wr);
  json a = json::object();
  for (const auto& [file, bytes] : artifacts) a[file] = hex64(fnv1a64(bytes));
  m["artifacts"] = a;
  if (!extra.is_null()) m["results"] = extra;
  write_file_atomic(join(dir, name), dump_sorted(m));
}

/// Write each artifact atomically; returns the (name, bytes) list for the manifest.
void emit(const std::string& dir, std::vector<std::pair<std::string, std::string>>& list,
          const std::string& name, std::string bytes) {
  write_file_atomic(join(dir, name), bytes);
  list.emplace_back(name, std::move(bytes));
}

std::string run_dir_of(const CommandOptions& o) {
  if (!o.run_dir.empty()) return o.run_dir;
  if (!o.out_dir.empty()) return o.out_dir;
  if (!o.config_path.empty()) return resolve_config(o).output_dir;
  throw ConfigError("a run directory or config is required");
}

/// Configuration stored in a run manifest.
RunConfig stored_config(const std::string& dir) {
  const std::string text = read_file(join(dir, "manifest.json"));
  json m;
  try {
    m = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("manifest.json: " + std::string(e.what()));
  }
  if (!m.contains("config")) throw ConfigError("manifest.json: no config");
  return parse_config(m.at("config"));
}

Checkpoint checked_checkpoint(const std::string& path, const RunConfig& c) {
  Checkpoint cp = load_checkpoint(path);
  if (cp.manifest_hash != config_hash(c))
    throw ConfigError(path + ": checkpoint does not belong to this configuration");
  return cp;
}

std::vector<InitialDatum> attractor_family(const RunConfig& c, const Grid& g) {
  std::vector<InitialDatum> fam;
  if (!c.attractor.family.empty()) {
    for (std::size_t i = 0; i < c.attractor.family.size(); ++i)
      fam.push_back({"member" + std::to_string(i),
                     make_field_ptr(leray_project(build_field(c.attractor.family[i], g))), nullptr});
    return fam;
  }
  // Five random data with phase-space norms^2 from 0.1 to 10 (constant histories).
  for (int i = 0; i < 5; ++i) {
    const double e = 0.1 * std::pow(10.0, 0.5 * i);
    const double v = std::sqrt(e / (1.0 + c.h));
    fam.push_back({"random" + std::to_string(i), make_field_ptr(random_field(g, 1000 + static_cast<std::uint64_t>(i), 1.0, v)),
                   nullptr});
  }
  return fam;
}

}  // namespace

RunConfig resolve_config(const CommandOptions& o) {
  if (o.config_path.empty()) throw ConfigError("--config is required");
  RunConfig c = load_config(o.config_path);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.dt) c.dt = *o.dt;
  if (o.t_end) c.t_end = *o.t_end;
  if (!o.certificates.empty()) c.certificates = o.certificates;
  if (!o.functionals.empty()) c.measure.functionals = o.functionals;
  if (!o.taus.empty()) c.attractor.taus = o.taus;
  if (o.depth) c.measure.depth = *o.depth;
  if (o.doublings) c.measure.doublings = *o.doublings;
  if (o.xi) c.attractor.xi = *o.xi;
  if (o.override_hypotheses) c.override_hypotheses = true;
  return c;
}

int cmd_hypotheses(const CommandOptions& o, std::ostream& out) {
  const RunConfig c = resolve_config(o);
  const Grid g = make_grid(c);
  const HypothesisWindow w =
      evaluate_hypotheses(make_params(c, g), make_delay(c), HypothesisInputs{c.sigma, c.beta, c.cg_override});
  out << format_window(w);
  if (!w.feasible) {
    const HypothesisCondition* v = w.first_violation();
    out << "infeasible: " << (v ? v->id + " (" + v->description + ")" : std::string("unknown")) << '\n';
    return kExitConfig;
  }
  return kExitPass;
}

int cmd_simulate(const CommandOptions& o, std::ostream& out) {
  const RunConfig c = resolve_config(o);
  const Grid g = make_grid(c);
  const WindowResult wr = window_for(c, g);
  const Problem p = make_problem(c, g);
  const StepperConfig sc = make_stepper(c);
  const ProcessState s0 = make_initial_state(c, g);
  const std::uint64_t hash = config_hash(c);
  const std::string dir = c.output_dir;

  EvolveOptions opt;
  opt.record_budget = true;
  const Run run = evolve(s0, steps_for(c.t_end, c.dt), p, sc, opt);
  const std::vector<BoundCertificate> certs = single_run_certificates(run, wr, c.certificates);

  std::vector<std::pair<std::string, std::string>> files;
  emit(dir, files, "energy.csv", energy_csv(run));
  emit(dir, files, "budget.csv", budget_csv(run));
  emit(dir, files, "initial.nsvc", encode_checkpoint(run.initial, hash));
  emit(dir, files, "final.nsvc", encode_checkpoint(run.final, hash));
  emit(dir, files, "certificates.json", dump_sorted(certificates_json(certs)));
  save_snapshot(join(dir, "final.nsvf"), *run.final.u, run.final.time());
  files.emplace_back("final.nsvf", read_file(join(dir, "final.nsvf")));
  json results = {{"final_field_checksum", hex64(field_checksum(*run.final.u))},
                  {"steps", run.num_steps()}};
  write_manifest(dir, "manifest.json", "simulate", c, wr, files, results);

  out << "simulated " << run.num_steps() << " steps to t = " << fmt_double(run.t_end()) << " -> " << dir
      << '\n';
  if (wr.overridden) out << "warning: hypothesis window infeasible, override recorded\n";
  print_summary(out, certs);
  return exit_for(certs);
}

int cmd_certify(const CommandOptions& o, std::ostream& out) {
  const std::string dir = run_dir_of(o);
  const RunConfig stored = stored_config(dir);
  RunConfig c = stored;
  if (!o.certificates.empty()) c.certificates = o.certificates;
  const Grid g = make_grid(c);
  const WindowResult wr = window_for(c, g);

  Run run;
  run.initial = checked_checkpoint(join(dir, "initial.nsvc"), stored).state;
  run.final = checked_checkpoint(join(dir, "final.nsvc"), stored).state;
  run.problem = make_problem(c, g);
  run.cfg = make_stepper(c);
  run.energy = parse_energy_csv(read_file(join(dir, "energy.csv")));
  if (static_cast<std::int64_t>(run.energy.size()) != run.num_steps() + 1)
    throw ConfigError("energy.csv does not match the stored checkpoints");
  for (std::size_t j = 0; j < run.initial.history.size(); ++j)
    run.history_v2.push_back(norm_sq(*run.initial.history.slot(j), Space::V));

  const std::vector<BoundCertificate> certs = single_run_certificates(run, wr, c.certificates);
  write_file_atomic(join(dir, "certify.json"), dump_sorted(certificates_json(certs)));
  out << "certified stored run in " << dir << '\n';
  print_summary(out, certs);
  return exit_for(certs);
}

int cmd_attractor(const CommandOptions& o, std::ostream& out) {
  const RunConfig c = resolve_config(o);
  const Grid g = make_grid(c);
  const WindowResult wr = window_for(c, g);
  const Problem p = make_problem(c, g);
  const StepperConfig sc = make_stepper(c);
  const std::string dir = c.output_dir;
  const double tstar = c.attractor.t_star;
  std::vector<double> taus = c.attractor.taus;
  if (taus.empty())
    for (double k : {2.0, 4.0, 8.0, 16.0}) taus.push_back(tstar - k * c.h);
  const std::vector<InitialDatum> fam = attractor_family(c, g);
  const int nh = static_cast<int>(steps_for(c.h, c.dt));

  const SweepResult sweep = pullback_sweep(tstar, taus, fam, p, sc);

  std::vector<BoundCertificate> certs;
  const auto wants = [&](const std::string& id) {
    return std::find(c.certificates.begin(), c.certificates.end(), id) != c.certificates.end();
  };
  if (wr.overridden) {
    certs.push_back(inconclusive("absorb-R1", "hypothesis window infeasible (override)"));
  } else {
    // Absorbing check over every (tau, member) endpoint.
    std::vector<Run> runs;
    for (std::size_t ti = 0; ti < taus.size(); ++ti)
      for (std::size_t mi = 0; mi < fam.size(); ++mi) {
        Run r;
        r.initial = make_constant_state(steps_for(taus[ti], c.dt), c.dt, nh, fam[mi].u0);
        r.final = sweep.clouds[ti].members[mi].state;
        r.problem = p;
        r.cfg = sc;
        runs.push_back(std::move(r));
      }
    std::vector<const Run*> ptrs;
    for (const auto& r : runs) ptrs.push_back(&r);
    certs.push_back(certify_absorbing(ptrs, wr.window));

    if (wants("contract") || wants("lipschitz")) {
      if (fam.size() < 2) throw ConfigError("contraction checks need two family members");
      EvolveOptions opt;
      opt.store_fields = true;
      const std::int64_t ts = steps_for(tstar, c.dt), t0 = steps_for(taus.back(), c.dt);
      const Run a = evolve(make_constant_state(t0, c.dt, nh, fam[0].u0), ts, p, sc, opt);
      const Run b = evolve(make_constant_state(t0, c.dt, nh, fam[1].u0), ts, p, sc, opt);
      if (wants("contract")) certs.push_back(contraction_psi(a, b, wr.window).certificate);
      if (wants("lipschitz")) certs.push_back(certify_lipschitz_in_initial_data(a, b, wr.window));
    }
  }

  RegularitySplit split;
  bool have_split = false;
  if (wants("regularity-w") || wants("regularity-v")) {
    if (wr.overridden) {
      certs.push_back(inconclusive("regularity", "hypothesis window infeasible (override)"));
    } else {
      EvolveOptions opt;
      opt.store_fields = true;
      const Run parent = evolve(make_constant_state(steps_for(taus.front(), c.dt), c.dt, nh, fam[0].u0),
                                steps_for(tstar, c.dt), p, sc, opt);
      split = regularity_split(parent, c.attractor.xi, wr.window);
      have_split = true;
      if (wants("regularity-w")) certs.push_back(split.w_bound);
      if (wants("regularity-v")) certs.push_back(split.v_bound);
    }
  }

  std::vector<std::pair<std::string, std::string>> files;
  emit(dir, files, "sweep.csv", sweep_csv(sweep));
  emit(dir, files, "attractor_certificates.json", dump_sorted(certificates_json(certs)));
  std::vector<BundleEntry> entries;
  for (const auto& m : sweep.clouds.back().members)
    entries.push_back({m.datum_id, Snapshot{*m.state.u, m.state.time()}});
  save_bundle(join(dir, "attractor_endpoints.nsvb"), entries);
  files.emplace_back("attractor_endpoints.nsvb", read_file(join(dir, "attractor_endpoints.nsvb")));
  json results = {{"semidistance", sweep.d}, {"taus", sweep.taus}};
  if (have_split)
    results["regularity"] = {{"truncation_K", split.truncation_K},
                             {"residual_h", split.residual_h},
                             {"residual_vdual", split.residual_vdual},
                             {"additivity_gap", split.additivity_gap}};
  write_manifest(dir, "attractor_manifest.json", "attractor", c, wr, files, results);

  out << "pullback sweep to t* = " << fmt_double(tstar) << " over " << taus.size() << " depths, "
      << fam.size() << " members\n";
  out << sweep_csv(sweep);
  if (have_split)
    out << "regularity split: K = " << split.truncation_K << ", additivity gap " << split.additivity_gap << '\n';
  print_summary(out, certs);
  return exit_for(certs);
}

int cmd_measure(const CommandOptions& o, std::ostream& out) {
  const RunConfig c = resolve_config(o);
  const Grid g = make_grid(c);
  const WindowResult wr = window_for(c, g);
  const Problem p = make_problem(c, g);
  const StepperConfig sc = make_stepper(c);
  const MeasureConfig& mc = c.measure;
  const std::string dir = c.output_dir;
  const int nh = static_cast<int>(steps_for(c.h, c.dt));

  const std::int64_t t_step = steps_for(mc.t, c.dt);
  const double tau = mc.tau < 0.0 ? mc.t - c.h : mc.tau;
  const std::int64_t tau_step = steps_for(tau, c.dt);
  if (tau_step > t_step) throw ConfigError("measure: tau after t");
  const std::int64_t stride = mc.stride > 0.0 ? steps_for(mc.stride, c.dt) : 1;
  const StateFamily rho = constant_family(make_field_ptr(leray_project(build_field(mc.rho, g))), c.dt, nh);
  std::vector<Functional> phis;
  for (const auto& id : mc.functionals) phis.push_back(functionals::by_id(id, g));

  PushforwardCache cache(p, sc, rho);
  const DepthSweep sweep = depth_doubling(cache, tau_step, t_step, mc.depth, mc.doublings, stride, phis);

  std::vector<BoundCertificate> certs;
  const std::int64_t dmax = steps_for(mc.depth * std::pow(2.0, mc.doublings), c.dt);
  const EmpiricalMeasure deep = build_measure(cache, t_step, t_step - dmax, stride);
  if (wr.overridden) certs.push_back(inconclusive("support-R1", "hypothesis window infeasible (override)"));
  else certs.push_back(certify_support(deep, rho, p.forcing, wr.window));

  std::vector<std::pair<std::string, std::string>> files;
  emit(dir, files, "measure.csv", measure_csv(sweep));
  emit(dir, files, "measure_certificates.json", dump_sorted(certificates_json(certs)));
  std::vector<BundleEntry> entries;
  for (const auto& s : deep.samples)
    entries.push_back({"s=" + std::to_string(s.start_step) + ",m=" + std::to_string(s.multiplicity),
                       Snapshot{*s.state.u, s.state.time()}});
  save_bundle(join(dir, "measure_samples.nsvb"), entries);
  files.emplace_back("measure_samples.nsvb", read_file(join(dir, "measure_samples.nsvb")));
  json results = {{"convergence_indicator", sweep.convergence_indicator},
                  {"total_multiplicity", deep.total_multiplicity}};
  write_manifest(dir, "measure_manifest.json", "measure", c, wr, files, results);

  out << measure_csv(sweep);
  out << "convergence indicator (largest extrapolated residual): " << sweep.convergence_indicator << '\n';
  print_summary(out, certs);
  return exit_for(certs);
}

int cmd_replay(const CommandOptions& o, std::ostream& out) {
  const std::string dir = run_dir_of(o);
  const RunConfig c = stored_config(dir);
  const Grid g = make_grid(c);
  const std::string from = o.checkpoint.empty() ? join(dir, "initial.nsvc") : o.checkpoint;
  const Checkpoint start = checked_checkpoint(from, c);
  const Checkpoint stored_final = checked_checkpoint(join(dir, "final.nsvc"), c);
  const std::int64_t target = o.t_end ? steps_for(*o.t_end, c.dt) : stored_final.state.step;
  const ProcessState end = evolve_state(start.state, target, make_problem(c, g), make_stepper(c));
  const std::string bytes = encode_checkpoint(end, start.manifest_hash);
  write_file_atomic(join(dir, "replay.nsvc"), bytes);
  out << "replayed from step " << start.state.step << " to step " << end.step << '\n';
  if (target != stored_final.state.step) return kExitPass;
  const bool same = bytes == encode_checkpoint(stored_final.state, stored_final.manifest_hash);
  out << (same ? "bit-identical to the stored final state\n" : "MISMATCH with the stored final state\n");
  return same ? kExitPass : kExitFail;
}

int run_command(const std::string& name, const CommandOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (name == "hypotheses") return cmd_hypotheses(o, out);
    if (name == "simulate") return cmd_simulate(o, out);
    if (name == "certify") return cmd_certify(o, out);
    if (name == "attractor") return cmd_attractor(o, out);
    if (name == "measure") return cmd_measure(o, out);
    if (name == "replay") return cmd_replay(o, out);
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    err << "infeasible hypotheses: " << e.what() << '\n' << format_window(e.window());
    return kExitConfig;
  } catch (const MissingArtifactError& e) {
    err << "missing artifact: " << e.what() << '\n';
    return kExitMissingArtifact;
  } catch (const BlowUpError& e) {
    err << "blow-up at t = " << e.time() << ": " << e.what() << '\n';
    return kExitBlowUp;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace nsv
