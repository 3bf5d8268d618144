#pragma once

// Intelligent PID around the ultra-local model: the estimated F cancels the
// plant, the PID shapes what is left.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mfc/ultra_local.hpp"

namespace mfc {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct ChannelControllerState {
  PidGains gains;
  double integral_e = 0.0; // signal-units * s
  std::optional<double> u_min;
  std::optional<double> u_max;
  double last_u = 0.0;
  double last_e = 0.0; // previous error, for the trapezoid integral
};

inline void reset(ChannelControllerState& state) {
  state.integral_e = 0.0;
  state.last_u = 0.0;
  state.last_e = 0.0;
}

// u = (1/alpha) * (y*^(n) - F_hat + Kp e + Ki int(e) + Kd de), clamped to the
// configured bounds. The error integral advances by the trapezoid rule; if
// the output saturates, this step's integral advance is rolled back so the
// integral cannot wind up against the limit.
inline double compute_control(ChannelControllerState& state,
                              const UltraLocalChannel& channel, double ref_deriv_n,
                              double F_hat, double e, double e_dot, double dt) {
  const double alpha = channel.alpha_diagonal();
  if (alpha == 0.0)
    throw std::invalid_argument("compute_control: channel diagonal alpha is zero");
  if (state.u_min && state.u_max && !(*state.u_min < *state.u_max))
    throw std::invalid_argument("compute_control: u_min must be < u_max");

  const double integral_before = state.integral_e;
  state.integral_e += 0.5 * (state.last_e + e) * dt;
  state.last_e = e;

  const PidGains& g = state.gains;
  double u = (ref_deriv_n - F_hat + g.kp * e + g.ki * state.integral_e + g.kd * e_dot) / alpha;

  const double lo = state.u_min.value_or(-std::numeric_limits<double>::infinity());
  const double hi = state.u_max.value_or(std::numeric_limits<double>::infinity());
  if (u < lo || u > hi) {
    state.integral_e = integral_before; // anti-windup: freeze on saturation
    u = std::clamp(u, lo, hi);
  }
  state.last_u = u;
  return u;
}

} // namespace mfc
