#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsv/hypotheses.hpp"
#include "nsv/stepper.hpp"

namespace nsv {

/// Recipe for a field.
///   zero
///   shear:     amplitude, wavenumber
///   random:    seed, decay, v_norm (0 keeps the raw scale)
///   snapshot:  path
///   stokes:    factor * A(of)   (e.g. the forcing nu A u* that balances u*)
///   sum:       terms
struct FieldSpec {
  std::string type = "zero";
  double amplitude = 1.0;
  int wavenumber = 1;
  std::uint64_t seed = 0;
  double decay = 1.0;
  double v_norm = 0.0;
  std::string path;
  double factor = 1.0;
  std::vector<FieldSpec> terms;  // "of" is terms[0] for stokes
};

struct DelayConfig {
  std::string kind = "discrete";
  double gain = 0.0;
  std::string map = "identity";
  double tau0 = 0.0, tau1 = 0.0, omega = 0.0;
  /// distributed kernel: point_mass | uniform | exponential | samples
  std::string kernel = "uniform";
  double kernel_rate = 1.0;
  std::vector<double> kernel_samples;
};

struct ForcingConfig {
  std::string kind = "zero";
  FieldSpec amplitude;
  double c0 = 1.0, a1 = 0.0, omega = 0.0, delta = 0.0;
};

struct AttractorConfig {
  double t_star = 0.0;
  std::vector<double> taus;
  std::vector<FieldSpec> family;
  double xi = 0.1;
};

struct MeasureConfig {
  double t = 0.0;
  double tau = -1.0;
  double depth = 1.0;
  int doublings = 3;
  double stride = 0.0;  // time between samples; 0 means dt
  std::vector<std::string> functionals = {"one", "energy", "enstrophy"};
  FieldSpec rho;
};

struct RunConfig {
  int dim = 2;
  int n = 16;
  double box_length = 6.283185307179586;
  double nu = 1.0, alpha = 1.0, h = 0.5;
  double dt = 0.01;
  Scheme scheme = Scheme::ImexCnab2;
  double t_start = 0.0, t_end = 5.0;
  bool convection = true;
  DelayConfig delay;
  ForcingConfig forcing;
  double sigma = 0.1, beta = 0.1;
  std::optional<double> cg_override;
  /// Run even if the hypothesis window is infeasible (recorded in outputs).
  bool override_hypotheses = false;
  std::map<std::string, double> embedding;  // overrides of C1..C7p
  FieldSpec initial;
  /// constant | zero | field (history_field for every slot)
  std::string history = "constant";
  FieldSpec history_field;
  std::vector<std::string> certificates = {"decay", "window", "deriv-R2"};
  std::string output_dir = "nsv_out";
  AttractorConfig attractor;
  MeasureConfig measure;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Full configuration with every default filled in (keys sorted).
nlohmann::json to_json(const RunConfig& c);

SpectralField build_field(const FieldSpec& spec, const Grid& grid);

Grid make_grid(const RunConfig& c);
PhysicalParams make_params(const RunConfig& c, const Grid& grid);
DelaySpec make_delay(const RunConfig& c);
ForcingSpec make_forcing(const RunConfig& c, const Grid& grid);
Problem make_problem(const RunConfig& c, const Grid& grid);
StepperConfig make_stepper(const RunConfig& c);
ProcessState make_initial_state(const RunConfig& c, const Grid& grid);
HypothesisWindow make_window(const RunConfig& c, const Grid& grid);

}  // namespace nsv
