// Command-line front end: hypotheses, simulate, certify, attractor, measure, replay.
#include <cstdlib>
#include <iostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "nsv/commands.hpp"

int main(int argc, char** argv) {
  // Worker count comes from the environment only.
  if (const char* w = std::getenv("NSV_WORKERS")) {
    const int n = std::atoi(w);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Navier-Stokes-Voigt with delay: simulation and verification lab"};
  app.require_subcommand(1);
  nsv::CommandOptions o;

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("-c,--config", o.config_path, "JSON configuration file");
    sc->add_option("-o,--out", o.out_dir, "output directory (overrides the config)");
    sc->add_option("--dt", o.dt, "time step");
    sc->add_flag("--override", o.override_hypotheses, "run even if the hypothesis window is infeasible");
  };

  auto* hyp = app.add_subcommand("hypotheses", "report the admissible constants of a configuration");
  add_common(hyp);

  auto* sim = app.add_subcommand("simulate", "evolve a configuration and certify the run");
  add_common(sim);
  sim->add_option("--t-end", o.t_end, "final time");
  sim->add_option("--certificates", o.certificates, "certificate ids (decay, window, deriv-R2, absorb-R1)")
      ->delimiter(',');

  auto* cert = app.add_subcommand("certify", "re-check certificates on a stored run");
  add_common(cert);
  cert->add_option("-r,--run", o.run_dir, "run directory written by simulate");
  cert->add_option("--certificates", o.certificates, "certificate ids")->delimiter(',');

  auto* att = app.add_subcommand("attractor", "pullback sweep, absorbing and regularity checks");
  add_common(att);
  att->add_option("--taus", o.taus, "initial times, strictly decreasing")->delimiter(',');
  att->add_option("--xi", o.xi, "forcing truncation tolerance");
  att->add_option("--certificates", o.certificates,
                  "extra checks (contract, lipschitz, regularity-w, regularity-v)")
      ->delimiter(',');

  auto* mea = app.add_subcommand("measure", "window-depth doubling of invariance residuals");
  add_common(mea);
  mea->add_option("--depth", o.depth, "base window depth");
  mea->add_option("--doublings", o.doublings, "number of depth doublings");
  mea->add_option("--functionals", o.functionals, "functional ids (one, energy, enstrophy, ev2, mode:..)")
      ->delimiter(',');

  auto* rep = app.add_subcommand("replay", "re-run a stored run from a checkpoint and compare");
  add_common(rep);
  rep->add_option("-r,--run", o.run_dir, "run directory written by simulate");
  rep->add_option("--checkpoint", o.checkpoint, "checkpoint to start from");
  rep->add_option("--t-end", o.t_end, "stop time (default: the stored final time)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nsv::kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return nsv::run_command(name, o, std::cout, std::cerr);
}
