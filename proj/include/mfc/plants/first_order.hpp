#pragma once

// Minimal first-order vector plant y' = a.*y + c + G u. Useful as a matched
// counterpart of the decoupled channel models in tests and demos.

#include <stdexcept>
#include <vector>

#include "mfc/plants/plant.hpp"

namespace mfc::plants {

struct FirstOrderConfig {
  std::vector<double> a;                  // state feedback, per output
  std::vector<double> c;                  // constant drift, per output
  std::vector<std::vector<double>> gain;  // G, outputs x inputs
  std::vector<double> y0;                 // initial outputs
};

class FirstOrderPlant : public Plant {
public:
  explicit FirstOrderPlant(const FirstOrderConfig& cfg) : cfg_(cfg), y_(cfg.y0) {
    const std::size_t p = cfg.y0.size();
    if (cfg.a.size() != p || cfg.c.size() != p || cfg.gain.size() != p)
      throw std::invalid_argument("first-order plant: inconsistent sizes");
    m_ = cfg.gain.empty() ? 0 : static_cast<int>(cfg.gain[0].size());
    for (const auto& row : cfg.gain)
      if (static_cast<int>(row.size()) != m_)
        throw std::invalid_argument("first-order plant: ragged gain matrix");
  }

  int num_inputs() const override { return m_; }
  int num_outputs() const override { return static_cast<int>(y_.size()); }
  std::vector<double> outputs() const override { return y_; }

  void step(const std::vector<double>& u, double dt, int substeps) override {
    const double hs = dt / substeps;
    for (int s = 0; s < substeps; ++s) {
      const auto k1 = field(y_, u);
      const auto k2 = field(shifted(y_, k1, 0.5 * hs), u);
      const auto k3 = field(shifted(y_, k2, 0.5 * hs), u);
      const auto k4 = field(shifted(y_, k3, hs), u);
      for (std::size_t i = 0; i < y_.size(); ++i)
        y_[i] += hs / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
  }

  std::vector<double> output_derivative(int order,
                                        const std::vector<double>& u_held) const override {
    if (order == 1) return field(y_, u_held);
    if (order == 2) {
      auto dy = field(y_, u_held);
      std::vector<double> ddy(dy.size());
      for (std::size_t i = 0; i < dy.size(); ++i) ddy[i] = cfg_.a[i] * dy[i];
      return ddy;
    }
    throw std::invalid_argument("first-order plant: derivative order must be 1 or 2");
  }

  PlantMetadata metadata() const override {
    PlantMetadata meta;
    meta.output_orders.assign(y_.size(), 1);
    meta.input_nonlinear.assign(y_.size(), false);
    return meta;
  }

private:
  std::vector<double> field(const std::vector<double>& y,
                            const std::vector<double>& u) const {
    std::vector<double> dy(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      double acc = cfg_.a[i] * y[i] + cfg_.c[i];
      for (std::size_t j = 0; j < u.size(); ++j) acc += cfg_.gain[i][j] * u[j];
      dy[i] = acc;
    }
    return dy;
  }
  static std::vector<double> shifted(const std::vector<double>& y,
                                     const std::vector<double>& k, double s) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + s * k[i];
    return out;
  }

  FirstOrderConfig cfg_;
  std::vector<double> y_;
  int m_ = 0;
};

} // namespace mfc::plants
