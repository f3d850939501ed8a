#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsv/delay.hpp"
#include "nsv/embedding.hpp"
#include "nsv/errors.hpp"

namespace nsv {

struct PhysicalParams {
  double nu = 1.0;
  double alpha = 1.0;
  double h = 1.0;
  double lambda1 = 1.0;
  EmbeddingConstants emb;
};

struct HypothesisCondition {
  std::string id;
  std::string description;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  /// Fatal conditions make the window infeasible; the rest are reported only.
  bool fatal = true;
};

/// Admissible constants for a parameter set and the derived quantities used
/// by the certificates.
struct HypothesisWindow {
  double sigma_max = 0.0;  // upper end of the sigma interval at this C_g
  double beta_max = 0.0;   // upper end of the beta interval at this sigma, C_g
  double cg_max = 0.0;     // upper end of the C_g interval at this sigma
  double sigma = 0.0, beta = 0.0, Cg = 0.0, Lg = 0.0;
  double eta1 = 0.0, eta2 = 0.0, eta5 = 0.0, eta6 = 0.0;
  /// false when the delay gain is zero (C_g then does not constrain anything)
  bool delay_constrained = true;
  bool cg_overridden = false;
  std::vector<HypothesisCondition> conditions;
  bool feasible = false;
  PhysicalParams params;

  /// First violated fatal condition, or null.
  const HypothesisCondition* first_violation() const;

  // Derived constants shared by the certificates.
  double inv_l1() const { return 1.0 / params.lambda1; }
  double alpha2() const { return params.alpha * params.alpha; }
  /// Prefactor of the initial data in the energy decay bound.
  double K0() const;
  /// Prefactor of the initial difference in the contraction bound.
  double K2() const;
};

struct HypothesisInputs {
  double sigma = 0.0;
  double beta = 0.0;
  /// Use this C_g instead of the value derived from the delay spec.
  std::optional<double> cg_override;
};

class InfeasibleError : public ConfigError {
 public:
  explicit InfeasibleError(HypothesisWindow w);
  const HypothesisWindow& window() const { return window_; }

 private:
  HypothesisWindow window_;
};

/// Evaluate every interval and derived constant without throwing.
HypothesisWindow evaluate_hypotheses(const PhysicalParams& p, const DelaySpec& spec,
                                     const HypothesisInputs& in);

/// As evaluate_hypotheses, but throws InfeasibleError naming the first
/// violated fatal condition.
HypothesisWindow check_hypotheses(const PhysicalParams& p, const DelaySpec& spec,
                                  const HypothesisInputs& in);

std::string format_window(const HypothesisWindow& w);

}  // namespace nsv
