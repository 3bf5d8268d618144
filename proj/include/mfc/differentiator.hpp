#pragma once

// Derivative estimation for noisy sampled signals. A truncated Taylor model
// of the signal is identified through iterated integrals of the window; the
// construction reduces to a fixed set of FIR weight rows, one per derivative
// order, applied to the sample window.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfc/detail/math.hpp"

namespace mfc {

struct EstimatorSpec {
  int taylor_order = 1;        // N: highest derivative order estimated
  int integration_order = 3;   // nu: number of extra integrations, nu >= N+1
  double window_length = 0.5;  // T [s]; adjusted to (M-1)*h when h does not divide T
  double sample_period = 1e-3; // h [s]
};

// Sample window covering [0, T], oldest sample first, uniform spacing h.
struct SignalWindow {
  std::vector<double> samples;
  double h = 0.0;
};

namespace detail {

// 8-point Gauss-Legendre rule on [-1, 1]; exact for polynomials up to
// degree 15, which covers every weight polynomial used below.
struct GaussRule8 {
  static constexpr std::array<double, 4> abscissa = {
      0.1834346424956498, 0.5255324099163290,
      0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> weight = {
      0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
};

// One term of the right-hand-side functional:
//   coeff * (-1)^sderiv / (alpha-1)! * integral_0^T (T-tau)^(alpha-1) tau^sderiv x(tau) dtau
// For alpha == 0 the term degenerates to endpoint evaluation
//   coeff * (-1)^sderiv * T^sderiv * x(T).
struct FunctionalTerm {
  double coeff = 0.0;
  int alpha = 0;   // iterated-integration order
  int sderiv = 0;  // power of tau from d/ds differentiation
};

// Accumulate the discrete weights of one functional term into `row`.
// The signal is represented by its piecewise-linear interpolant on the
// uniform grid, and the product with the polynomial weight is integrated
// exactly interval by interval (trapezoidal signal model, exact moments).
inline void accumulate_term_weights(const FunctionalTerm& term, double T,
                                    double h, std::size_t M,
                                    std::vector<double>& row) {
  if (term.alpha == 0) {
    row[M - 1] += term.coeff * (term.sderiv % 2 ? -1.0 : 1.0) * ipow(T, term.sderiv);
    return;
  }
  const double scale =
      term.coeff * (term.sderiv % 2 ? -1.0 : 1.0) / factorial(term.alpha - 1);
  for (std::size_t j = 0; j + 1 < M; ++j) {
    const double a = static_cast<double>(j) * h;
    const double mid = a + 0.5 * h;
    const double half = 0.5 * h;
    double left = 0.0, right = 0.0;
    for (std::size_t g = 0; g < GaussRule8::abscissa.size(); ++g) {
      for (int sign = -1; sign <= 1; sign += 2) {
        const double tau = mid + sign * half * GaussRule8::abscissa[g];
        const double w = half * GaussRule8::weight[g];
        const double poly =
            ipow(T - tau, term.alpha - 1) * ipow(tau, term.sderiv);
        const double frac = (tau - a) / h; // position within the interval
        left += w * poly * (1.0 - frac);
        right += w * poly * frac;
      }
    }
    row[j] += scale * left;
    row[j + 1] += scale * right;
  }
}

// Coefficient of the unknown x^(i)(0) in equation m, in the time domain:
// falling(N-i, m) * T^(nu+m+i-N-1) / (nu+m+i-N-1)!
inline double lhs_coefficient(int N, int nu, double T, int m, int i) {
  const int a = nu + m + i - N; // >= 1 given nu >= N+1
  return falling(N - i, m) * ipow(T, a - 1) / factorial(a - 1);
}

// Terms of the right-hand side of equation m: expanding
// s^-nu d^m/ds^m { s^(N+1) x } by the Leibniz rule gives, for q = 0..m,
// binom(m,q) * falling(N+1,q) * s^(N+1-q-nu) * d^(m-q)x/ds^(m-q).
inline std::vector<FunctionalTerm> rhs_terms(int N, int nu, int m) {
  std::vector<FunctionalTerm> terms;
  terms.reserve(m + 1);
  for (int q = 0; q <= m; ++q) {
    FunctionalTerm t;
    t.coeff = binomial(m, q) * falling(N + 1, q);
    t.alpha = nu + q - N - 1;
    t.sderiv = m - q;
    terms.push_back(t);
  }
  return terms;
}

} // namespace detail

// Precomputed FIR realization of the derivative estimates on one window.
// Row i, dotted with the samples (oldest first), estimates x^(i) at the
// window origin. Immutable once built.
class EstimatorKernel {
public:
  EstimatorKernel(EstimatorSpec spec, std::vector<std::vector<double>> weights)
      : spec_(spec), weights_(std::move(weights)) {}

  const EstimatorSpec& spec() const { return spec_; }
  std::size_t window_size() const { return weights_.empty() ? 0 : weights_[0].size(); }
  int max_order() const { return static_cast<int>(weights_.size()) - 1; }
  const std::vector<double>& row(int order) const { return weights_.at(order); }
  const std::vector<std::vector<double>>& weights() const { return weights_; }

private:
  EstimatorSpec spec_;
  std::vector<std::vector<double>> weights_; // (N+1) x M
};

// Assemble the estimator's linear system and back-substitute it once,
// symbolically in the samples, producing one FIR row per derivative order.
// Equation m (m = 0..N) relates the unknowns x^(i)(0), i = 0..N-m, to a
// weighted integral of the window; the system is triangular with nonzero
// diagonal m! * T^(nu-1)/(nu-1)!, so row N-m falls out of equation m once
// the lower-order rows are known.
inline EstimatorKernel build_kernel(const EstimatorSpec& requested) {
  EstimatorSpec spec = requested;
  const int N = spec.taylor_order;
  const int nu = spec.integration_order;
  if (N < 0) throw std::invalid_argument("estimator: taylor_order must be >= 0");
  if (!(spec.window_length > 0.0)) throw std::invalid_argument("estimator: window_length must be > 0");
  if (!(spec.sample_period > 0.0)) throw std::invalid_argument("estimator: sample_period must be > 0");
  if (nu < N + 1)
    throw std::invalid_argument("estimator: integration_order must be >= taylor_order + 1");

  const double ratio = spec.window_length / spec.sample_period;
  const std::size_t M = static_cast<std::size_t>(std::llround(ratio)) + 1;
  if (M < static_cast<std::size_t>(N) + 2)
    throw std::invalid_argument("estimator: window holds fewer than N+2 samples");
  // h must divide T; otherwise the window is shortened to (M-1)*h and the
  // adjusted length is recorded in the spec carried by the kernel.
  spec.window_length = static_cast<double>(M - 1) * spec.sample_period;
  const double T = spec.window_length;
  const double h = spec.sample_period;

  std::vector<std::vector<double>> rows(static_cast<std::size_t>(N) + 1);
  for (int m = N; m >= 0; --m) {
    const int unknown = N - m;
    std::vector<double> row(M, 0.0);
    for (const auto& term : detail::rhs_terms(N, nu, m))
      detail::accumulate_term_weights(term, T, h, M, row);
    for (int i = 0; i < unknown; ++i) {
      const double c = detail::lhs_coefficient(N, nu, T, m, i);
      for (std::size_t j = 0; j < M; ++j) row[j] -= c * rows[i][j];
    }
    const double diag = detail::lhs_coefficient(N, nu, T, m, unknown);
    if (!(std::abs(diag) > 1e-280) || !std::isfinite(diag))
      throw std::runtime_error(
          "estimator: singular system, bad (N, nu, T, h) combination");
    for (std::size_t j = 0; j < M; ++j) row[j] /= diag;
    rows[unknown] = std::move(row);
  }
  return EstimatorKernel(spec, std::move(rows));
}

namespace detail {
inline void check_window(const EstimatorKernel& kernel, const SignalWindow& window) {
  if (window.samples.size() != kernel.window_size())
    throw std::invalid_argument(
        "estimator: window length " + std::to_string(window.samples.size()) +
        " does not match kernel (" + std::to_string(kernel.window_size()) + ")");
}
} // namespace detail

// Estimates of x^(i), i = 0..N, anchored at the OLDEST sample of the window.
inline std::vector<double> estimate_at_origin(const EstimatorKernel& kernel,
                                              const SignalWindow& window) {
  detail::check_window(kernel, window);
  std::vector<double> est(kernel.max_order() + 1, 0.0);
  for (int i = 0; i <= kernel.max_order(); ++i) {
    const auto& w = kernel.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * window.samples[j];
    est[i] = acc;
  }
  return est;
}

// Estimates anchored at the NEWEST sample: apply the origin kernel to the
// time-reversed window and flip the sign of odd derivative orders.
inline std::vector<double> estimate_at_now(const EstimatorKernel& kernel,
                                           const SignalWindow& window) {
  detail::check_window(kernel, window);
  std::vector<double> est(kernel.max_order() + 1, 0.0);
  const std::size_t M = kernel.window_size();
  for (int i = 0; i <= kernel.max_order(); ++i) {
    const auto& w = kernel.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < M; ++j) acc += w[j] * window.samples[M - 1 - j];
    est[i] = (i % 2 ? -acc : acc);
  }
  return est;
}

// Low-pass use of the same machinery: the order-0 estimate at the current
// instant is the denoised measurement.
inline double denoise(const EstimatorKernel& kernel, const SignalWindow& window) {
  detail::check_window(kernel, window);
  const auto& w = kernel.row(0);
  const std::size_t M = kernel.window_size();
  double acc = 0.0;
  for (std::size_t j = 0; j < M; ++j) acc += w[j] * window.samples[M - 1 - j];
  return acc;
}

} // namespace mfc
