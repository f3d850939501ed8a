#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsv/config.hpp"

namespace nsv {

/// Process exit codes.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInconclusive = 2,
  kExitConfig = 3,
  kExitMissingArtifact = 4,
  kExitBlowUp = 5,
};

/// Command-line overrides shared by the subcommands. Empty / unset fields
/// leave the configuration untouched.
struct CommandOptions {
  std::string config_path;
  std::string out_dir;
  /// Directory of a stored run (certify, replay).
  std::string run_dir;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::vector<std::string> certificates;
  std::vector<std::string> functionals;
  /// Attractor pullback schedule (initial times, strictly decreasing).
  std::vector<double> taus;
  std::optional<double> depth;
  std::optional<int> doublings;
  std::optional<double> xi;
  bool override_hypotheses = false;
  /// replay: checkpoint to start from (default: the run's initial checkpoint)
  std::string checkpoint;
};

int cmd_hypotheses(const CommandOptions& o, std::ostream& out);
int cmd_simulate(const CommandOptions& o, std::ostream& out);
int cmd_certify(const CommandOptions& o, std::ostream& out);
int cmd_attractor(const CommandOptions& o, std::ostream& out);
int cmd_measure(const CommandOptions& o, std::ostream& out);
int cmd_replay(const CommandOptions& o, std::ostream& out);

/// Dispatch by name, mapping exceptions to exit codes (messages go to err).
int run_command(const std::string& name, const CommandOptions& o, std::ostream& out, std::ostream& err);

/// Config file with the command-line overrides applied.
RunConfig resolve_config(const CommandOptions& o);

}  // namespace nsv
