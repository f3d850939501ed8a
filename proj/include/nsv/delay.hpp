#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nsv/history.hpp"

namespace nsv {

enum class DelayKind { Discrete, Variable, Distributed };
enum class PointwiseMap { Identity, Tanh };

const char* delay_kind_name(DelayKind k);
const char* pointwise_map_name(PointwiseMap m);

/// Delay term g(t, u_t) = gain * (delayed G(u)).
///   Discrete:    G(u(t - h))
///   Variable:    G(u(t - tau(t))), tau(t) = tau0 + tau1 sin(omega t)
///   Distributed: sum_j w_j G(u(t + theta_j)) over the history slots, where
///                `kernel` holds quadrature weights oldest first.
/// G is applied componentwise in physical space and satisfies G(0) = 0.
struct DelaySpec {
  DelayKind kind = DelayKind::Discrete;
  double gain = 0.0;
  double h = 1.0;
  double tau0 = 0.0, tau1 = 0.0, omega = 0.0;
  std::vector<double> kernel;
  PointwiseMap map = PointwiseMap::Identity;

  double map_lipschitz() const { return 1.0; }
  /// Total kernel mass (1 for the point-delay kinds).
  double kernel_mass() const;
  double tau(double t) const { return tau0 + tau1 * std::sin(omega * t); }
  /// 1 / (1 - sup |tau'|) for the variable kind, 1 otherwise.
  double shift_jacobian() const;
  /// Throws ConfigError on an inconsistent spec for the given slot layout.
  void validate(double dt) const;
};

/// Trapezoid quadrature weights of a density mu(theta) on the slot grid.
std::vector<double> kernel_from_density(double h, int steps_per_h, double (*mu)(double));
std::vector<double> kernel_from_samples(double h, const std::vector<double>& density);
/// Unit point mass at theta = -h.
std::vector<double> point_mass_kernel(int steps_per_h);

SpectralField delay_g(const DelaySpec& spec, double t, const HistorySegment& hist);

/// Lipschitz constant of g with respect to the sup-V norm on the segment.
double lipschitz_bound(const DelaySpec& spec, double lambda1 = 1.0);

}  // namespace nsv
