#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsv/hypotheses.hpp"
#include "nsv/run.hpp"

namespace nsv {

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

/// Both sides of an inequality sampled along a trajectory.
/// verdict is Pass iff lhs <= rhs (1 + tol) at every sample (unless a
/// precondition made it Inconclusive); min_margin = min(rhs - lhs).
struct BoundCertificate {
  std::string id;
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> rhs;
  /// Per-sample verdicts, filled by certificates that can be inconclusive
  /// sample by sample (absorbing family).
  std::vector<Verdict> sample_verdicts;
  double tol = 1e-12;
  double min_margin = 0.0;
  Verdict verdict = Verdict::Pass;
  /// Instantiated constants, for auditability.
  std::map<std::string, double> constants;
  std::string note;

  /// Recompute margin and verdict from the samples.
  void finalize();
};

/// Energy decay inequality for |grad u(t)|^2 plus the weighted integral.
BoundCertificate certify_decay(const Run& run, const HypothesisWindow& w);

/// h-window integral of |grad u|^2 for t >= tau + h.
BoundCertificate certify_window_integral(const Run& run, const HypothesisWindow& w);

/// Radius of the absorbing ball: R1^2(t) = (1 + e^{sigma h}/eta1) rho(t) with
/// rho(t) = (beta alpha^2)^{-1} e^{-sigma t} int_{-inf}^t e^{sigma s} |f|_V'^2.
double absorbing_radius_sq(const ForcingSpec& f, const HypothesisWindow& w, double t);

/// Pullback-depth precondition of the absorbing check.
inline constexpr double kAbsorbDepthTol = 1e-3;

/// For every run: if e^{-sigma (t* - tau)} |init|^2 < 1e-3 R1^2(t*), check
/// |(u(t*), u_t*)|^2 <= R1^2(t*); otherwise the sample is inconclusive.
/// The overall verdict is Fail if any sample fails, else Inconclusive if any
/// sample is, else Pass.
BoundCertificate certify_absorbing(const std::vector<const Run*>& runs, const HypothesisWindow& w);

/// Time-derivative bound: int_{t-h}^t |d/ds u|_V^2 <= R2^2(t) at the run end
/// (requires t - tau >= 2h).
BoundCertificate certify_derivative_bound(const Run& run, const HypothesisWindow& w);

struct ContractionResult {
  double psi = 0.0;
  BoundCertificate certificate;
};

/// Contractive function of two runs with a common (tau, t) and the bound
/// dist^2 <= (1 + 1/eta2) K2 e^{-sigma (t - tau - h)} |init difference|^2 + psi.
/// Both runs need stored fields.
ContractionResult contraction_psi(const Run& run1, const Run& run2, const HypothesisWindow& w);

/// Lipschitz dependence on initial data:
/// |grad d(t)| <= L int_0^t |grad d| + |grad d(0)| alpha^{-1} (1/lambda1 + alpha^2)^{1/2},
/// L = alpha^{-2}(nu + C1 max(|grad u| + |grad v|)) + max(2 alpha^{-2} C_g, alpha^{-1} L_g).
BoundCertificate certify_lipschitz_in_initial_data(const Run& run1, const Run& run2,
                                                   const HypothesisWindow& w);

/// Ids of the certificates computed from one stored run.
const std::vector<std::string>& single_run_certificate_ids();

}  // namespace nsv
