#pragma once

// Smooth setpoint transitions: piecewise polynomial reference trajectories
// with enough continuous derivatives for the channel model orders.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfc/detail/math.hpp"

namespace mfc {

struct ReferenceSegment {
  double start_time = 0.0;
  double start_value = 0.0;
  double end_time = 0.0;
  double end_value = 0.0;
};

namespace detail {

// Coefficients of the degree 2r+1 smoothstep on [0,1]:
// S_r(s) = sum_k (-1)^k C(r+k,k) C(2r+1,r-k) s^(r+k+1), with S_r(0)=0,
// S_r(1)=1 and zero derivatives through order r at both ends.
inline std::vector<double> smoothstep_coeffs(int r) {
  std::vector<double> c(2 * r + 2, 0.0);
  for (int k = 0; k <= r; ++k) {
    const double term = ((k % 2) ? -1.0 : 1.0) * binomial(r + k, k) * binomial(2 * r + 1, r - k);
    c[r + k + 1] = term;
  }
  return c;
}

// Value and derivatives (orders 0..n) of the ascending-coefficient
// polynomial at x.
inline std::vector<double> poly_derivatives(const std::vector<double>& c, double x, int n) {
  std::vector<double> out(n + 1, 0.0);
  for (int order = 0; order <= n; ++order) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(order);) {
      double f = c[k];
      for (int j = 0; j < order; ++j) f *= static_cast<double>(k - j);
      acc += f * ipow(x, static_cast<int>(k) - order);
    }
    out[order] = acc;
  }
  return out;
}

} // namespace detail

// Piecewise reference y*(t): constant holds joined by smoothstep transitions
// that are C^r at the joints. eval() yields y* and its derivatives up to
// order r, so the control law's feedforward terms exist analytically.
class ReferenceProfile {
public:
  ReferenceProfile(double initial_value, std::vector<ReferenceSegment> segments,
                   int smoothness_order = 2)
      : initial_(initial_value), segments_(std::move(segments)), r_(smoothness_order),
        coeffs_(detail::smoothstep_coeffs(smoothness_order)) {
    if (r_ < 1) throw std::invalid_argument("reference: smoothness order must be >= 1");
    double t_prev = -1e300;
    for (const auto& s : segments_) {
      if (!(s.end_time > s.start_time))
        throw std::invalid_argument("reference: segment must have end_time > start_time");
      if (s.start_time < t_prev)
        throw std::invalid_argument("reference: segments must be time-ordered and non-overlapping");
      t_prev = s.end_time;
    }
    // segments must chain values: start_value of segment k+1 is end_value of k
  }

  int smoothness_order() const { return r_; }
  const std::vector<ReferenceSegment>& segments() const { return segments_; }

  // Minimum and maximum value the reference attains (transitions are
  // monotone between endpoints).
  std::pair<double, double> value_range() const {
    double lo = initial_, hi = initial_;
    for (const auto& s : segments_) {
      lo = std::min({lo, s.start_value, s.end_value});
      hi = std::max({hi, s.start_value, s.end_value});
    }
    return {lo, hi};
  }

  // y*(t), dy*(t), ..., up to order r.
  std::vector<double> eval(double t) const {
    std::vector<double> out(static_cast<std::size_t>(r_) + 1, 0.0);
    double hold = initial_;
    for (const auto& s : segments_) {
      if (t < s.start_time) break;
      if (t < s.end_time) {
        const double span = s.end_time - s.start_time;
        const double x = (t - s.start_time) / span;
        auto sd = detail::poly_derivatives(coeffs_, x, r_);
        const double dv = s.end_value - s.start_value;
        double scale = 1.0;
        for (int i = 0; i <= r_; ++i) {
          out[i] = (i == 0 ? s.start_value : 0.0) + dv * sd[i] * scale;
          scale /= span;
        }
        return out;
      }
      hold = s.end_value;
    }
    out[0] = hold;
    return out;
  }

private:
  double initial_ = 0.0;
  std::vector<ReferenceSegment> segments_;
  int r_ = 2;
  std::vector<double> coeffs_;
};

} // namespace mfc
