#pragma once

// Linear MIMO plant given entrywise as transfer functions; each nonzero
// entry carries its own canonical realization and state.

#include <memory>
#include <stdexcept>
#include <vector>

#include "mfc/plants/plant.hpp"
#include "mfc/plants/state_space.hpp"

namespace mfc::plants {

struct TransferEntryConfig {
  int output = 0;
  int input = 0;
  std::vector<double> num; // ascending coefficients
  std::vector<double> den;
};

struct LinearMimoConfig {
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<TransferEntryConfig> entries;
};

class LinearMimoPlant : public Plant {
public:
  explicit LinearMimoPlant(const LinearMimoConfig& cfg)
      : m_(cfg.num_inputs), p_(cfg.num_outputs), last_u_(cfg.num_inputs, 0.0) {
    for (const auto& e : cfg.entries) {
      if (e.output < 0 || e.output >= p_ || e.input < 0 || e.input >= m_)
        throw std::invalid_argument("linear plant: entry indices out of range");
      Entry entry;
      entry.output = e.output;
      entry.input = e.input;
      entry.num = e.num;
      entry.den = e.den;
      entry.ss = realize_tf(e.num, e.den);
      entry.x = Eigen::VectorXd::Zero(entry.ss.order());
      entries_.push_back(std::move(entry));
    }
  }

  int num_inputs() const override { return m_; }
  int num_outputs() const override { return p_; }

  std::vector<double> outputs() const override {
    std::vector<double> y(p_, 0.0);
    for (const auto& e : entries_) {
      double v = e.ss.order() ? (e.ss.C * e.x).value() : 0.0;
      v += e.ss.D * last_u_[e.input];
      y[e.output] += v;
    }
    return y;
  }

  void step(const std::vector<double>& u, double dt, int substeps) override {
    if (static_cast<int>(u.size()) != m_)
      throw std::invalid_argument("linear plant: input size mismatch");
    const double hs = dt / substeps;
    for (auto& e : entries_) {
      if (e.ss.order() == 0) continue;
      const double uin = u[e.input];
      for (int s = 0; s < substeps; ++s) {
        const Eigen::VectorXd k1 = e.ss.A * e.x + e.ss.B * uin;
        const Eigen::VectorXd k2 = e.ss.A * (e.x + 0.5 * hs * k1) + e.ss.B * uin;
        const Eigen::VectorXd k3 = e.ss.A * (e.x + 0.5 * hs * k2) + e.ss.B * uin;
        const Eigen::VectorXd k4 = e.ss.A * (e.x + hs * k3) + e.ss.B * uin;
        e.x += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    last_u_ = u;
  }

  // d^order y / dt^order under a held input: C A^(order-1) (A x + B u).
  std::vector<double> output_derivative(int order,
                                        const std::vector<double>& u_held) const override {
    if (order < 1 || order > 2)
      throw std::invalid_argument("linear plant: derivative order must be 1 or 2");
    std::vector<double> dy(p_, 0.0);
    for (const auto& e : entries_) {
      if (e.ss.order() == 0) continue;
      Eigen::VectorXd v = e.ss.A * e.x + e.ss.B * u_held[e.input];
      if (order == 2) v = e.ss.A * v;
      dy[e.output] += (e.ss.C * v).value();
    }
    return dy;
  }

  PlantMetadata metadata() const override {
    PlantMetadata meta;
    meta.output_orders.assign(p_, 0);
    meta.input_nonlinear.assign(p_, false);
    for (const auto& e : entries_)
      meta.output_orders[e.output] = std::max(meta.output_orders[e.output], e.ss.order());
    return meta;
  }

  // Direct state access for tests (mode injection, fidelity checks).
  struct Entry {
    int output = 0;
    int input = 0;
    std::vector<double> num, den;
    StateSpace ss;
    Eigen::VectorXd x;
  };
  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }

private:
  int m_ = 0, p_ = 0;
  std::vector<Entry> entries_;
  std::vector<double> last_u_;
};

// The two-input two-output benchmark with unstable poles spread over a wide
// spectrum:
//   y1 = s^3 / ((s+0.01)(s+0.1)(s-1)s) u1
//   y2 = (s+1) / ((s+0.003)(s-0.03)(s+0.3)(s+3)) u1
//      + s^2 / ((s+0.004)(s+0.04)(s-0.4)(s+4)) u2
// The (1,1) entry shares a factor s between numerator and denominator; by
// default it is realized as written (4th order, pole and zero at the
// origin). `cancel_common_factor` switches to the reduced 3rd-order form.
inline LinearMimoConfig linear_2x2_config(bool cancel_common_factor = false) {
  LinearMimoConfig cfg;
  cfg.num_inputs = 2;
  cfg.num_outputs = 2;
  TransferEntryConfig e11;
  e11.output = 0;
  e11.input = 0;
  if (cancel_common_factor) {
    e11.num = {0.0, 0.0, 1.0}; // s^2
    e11.den = poly_from_roots({-0.01, -0.1, 1.0});
  } else {
    e11.num = {0.0, 0.0, 0.0, 1.0}; // s^3
    e11.den = poly_from_roots({-0.01, -0.1, 1.0, 0.0});
  }
  TransferEntryConfig e21;
  e21.output = 1;
  e21.input = 0;
  e21.num = {1.0, 1.0}; // s + 1
  e21.den = poly_from_roots({-0.003, 0.03, -0.3, -3.0});
  TransferEntryConfig e22;
  e22.output = 1;
  e22.input = 1;
  e22.num = {0.0, 0.0, 1.0}; // s^2
  e22.den = poly_from_roots({-0.004, -0.04, 0.4, -4.0});
  cfg.entries = {e11, e21, e22};
  return cfg;
}

} // namespace mfc::plants
