#include "nsv/history.hpp"

#include <cmath>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"

namespace nsv {

HistorySegment::HistorySegment(double dt, int nh, std::vector<FieldPtr> slots)
    : dt_(dt), nh_(nh), ring_(std::move(slots)) {
  if (!(dt > 0.0)) throw ConfigError("history: dt must be positive");
  if (nh < 1) throw ConfigError("history: h must span at least one step");
  if (ring_.size() != static_cast<std::size_t>(nh) + 1)
    throw ConfigError("history: slot count must be steps_per_h + 1");
  for (const auto& f : ring_) {
    if (!f) throw ConfigError("history: null slot");
    require_same_grid(f->grid(), ring_.front()->grid(), "history");
  }
}

HistorySegment HistorySegment::constant(double dt, int nh, FieldPtr u) {
  return HistorySegment(dt, nh, std::vector<FieldPtr>(static_cast<std::size_t>(nh) + 1, u));
}

HistorySegment HistorySegment::sampled(double dt, int nh,
                                       const std::function<SpectralField(double)>& phi) {
  std::vector<FieldPtr> slots;
  slots.reserve(static_cast<std::size_t>(nh) + 1);
  for (int j = 0; j <= nh; ++j) slots.push_back(make_field_ptr(phi(dt * (j - nh))));
  return HistorySegment(dt, nh, std::move(slots));
}

void HistorySegment::push(FieldPtr u) {
  ring_[head_] = std::move(u);
  head_ = (head_ + 1) % ring_.size();
}

void HistorySegment::set_newest(FieldPtr u) {
  ring_[(head_ + ring_.size() - 1) % ring_.size()] = std::move(u);
}

SpectralField history_eval(const HistorySegment& hist, double theta) {
  const double h = hist.h();
  const double eps = 1e-9 * hist.dt();
  if (!(theta >= -h - eps && theta <= eps))
    throw DomainError("history_eval: theta outside [-h, 0]");
  const double pos = (theta + h) / hist.dt();
  const double j = std::round(pos);
  if (std::abs(pos - j) <= 1e-9) return *hist.slot(static_cast<std::size_t>(j));
  const double lo = std::floor(pos);
  const std::size_t i = static_cast<std::size_t>(lo);
  return lerp(*hist.slot(i), *hist.slot(i + 1), pos - lo);
}

double history_v_integral(const HistorySegment& hist) {
  const std::size_t n = hist.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    s += w * norm_sq(*hist.slot(j), Space::V);
  }
  return s * hist.dt();
}

ProcessState make_state(std::int64_t step, double dt, FieldPtr u0, HistorySegment phi) {
  if (!u0) throw ConfigError("make_state: null field");
  if (phi.dt() != dt) throw ConfigError("make_state: history dt differs from state dt");
  require_same_grid(u0->grid(), phi.newest()->grid(), "make_state");
  phi.set_newest(u0);
  return ProcessState{step, dt, std::move(u0), std::move(phi), nullptr};
}

ProcessState make_constant_state(std::int64_t step, double dt, int nh, FieldPtr u0) {
  return make_state(step, dt, u0, HistorySegment::constant(dt, nh, u0));
}

double ev2_norm_sq(const ProcessState& s) {
  return norm_sq(*s.u, Space::V) + history_v_integral(s.history);
}

double ev2_norm(const ProcessState& s) { return std::sqrt(ev2_norm_sq(s)); }

double ev2_distance_sq(const ProcessState& a, const ProcessState& b) {
  if (a.history.size() != b.history.size() || a.history.dt() != b.history.dt())
    throw ConfigError("ev2_distance: history layouts differ");
  const std::size_t n = a.history.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    s += w * norm_sq(*a.history.slot(j) - *b.history.slot(j), Space::V);
  }
  return norm_sq(*a.u - *b.u, Space::V) + s * a.history.dt();
}

}  // namespace nsv
