#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nsv/spectral_field.hpp"

namespace nsv {

/// Solution segment over [t - h, t] sampled every dt: steps_per_h + 1 slots,
/// slot 0 at t - h (oldest) up to slot steps_per_h at t (newest).
class HistorySegment {
 public:
  HistorySegment() = default;
  HistorySegment(double dt, int steps_per_h, std::vector<FieldPtr> slots_oldest_first);

  /// Every slot holds the same field.
  static HistorySegment constant(double dt, int steps_per_h, FieldPtr u);
  /// Slot j holds phi(theta_j) with theta_j = -h + j dt.
  static HistorySegment sampled(double dt, int steps_per_h,
                                const std::function<SpectralField(double)>& phi);

  double dt() const { return dt_; }
  int steps_per_h() const { return nh_; }
  double h() const { return dt_ * nh_; }
  std::size_t size() const { return ring_.size(); }
  bool empty() const { return ring_.empty(); }

  /// Slot j, 0 = oldest.
  const FieldPtr& slot(std::size_t j) const { return ring_[(head_ + j) % ring_.size()]; }
  const FieldPtr& newest() const { return slot(ring_.size() - 1); }
  const FieldPtr& oldest() const { return slot(0); }

  /// Drop the oldest slot and append u as the newest.
  void push(FieldPtr u);
  /// Replace the newest slot.
  void set_newest(FieldPtr u);

 private:
  double dt_ = 0.0;
  int nh_ = 0;
  std::size_t head_ = 0;
  std::vector<FieldPtr> ring_;
};

/// u_t(theta). Exact slot when t + theta is a stored time (to 1e-9 of a step),
/// linear interpolation between the neighbours otherwise.
SpectralField history_eval(const HistorySegment& hist, double theta);

/// Trapezoid integral of |grad phi|^2 over [-h, 0].
double history_v_integral(const HistorySegment& hist);

/// State of the delayed process at time t = step * dt.
struct ProcessState {
  std::int64_t step = 0;
  double dt = 0.0;
  FieldPtr u;
  HistorySegment history;
  /// Explicit term of the previous step (multistep memory); null right after
  /// a (re)seed, which makes the next step a one-step start.
  FieldPtr explicit_prev;

  double time() const { return static_cast<double>(step) * dt; }
  const Grid& grid() const { return u->grid(); }
};

/// State at `step` with current value u0 and history phi; the newest slot is
/// set to u0 so the segment is consistent with the current value.
ProcessState make_state(std::int64_t step, double dt, FieldPtr u0, HistorySegment phi);
/// Constant history equal to u0.
ProcessState make_constant_state(std::int64_t step, double dt, int steps_per_h, FieldPtr u0);

/// Squared phase-space norm |grad u|^2 + integral of |grad phi|^2.
double ev2_norm_sq(const ProcessState& s);
double ev2_norm(const ProcessState& s);
/// Squared phase-space distance between two states with matching layout.
double ev2_distance_sq(const ProcessState& a, const ProcessState& b);

}  // namespace nsv
