#pragma once

// The coupled three-tank benchmark: Torricelli flows between tanks 1-3-2,
// an outlet on tank 2, pumps feeding tanks 1 and 2. Levels are the outputs.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mfc/plants/plant.hpp"

namespace mfc::plants {

struct ThreeTankParams {
  double tank_section = 0.0154;  // S [m^2]
  double pipe_section = 5e-5;    // S_p [m^2]
  double gravity = 9.81;         // g [m/s^2]
  std::array<double, 3> mu = {0.5, 0.675, 0.5}; // outflow coefficients

  // C_n = (1/S) mu_n S_p sqrt(2 g)
  double flow_coeff(int n) const {
    return mu[static_cast<std::size_t>(n)] * pipe_section * std::sqrt(2.0 * gravity) /
           tank_section;
  }
};

// Right-hand side of the level dynamics; defined for all real levels.
inline std::array<double, 3> three_tank_field(const std::array<double, 3>& x,
                                              const std::array<double, 2>& u,
                                              const ThreeTankParams& p) {
  const double c1 = p.flow_coeff(0), c2 = p.flow_coeff(1), c3 = p.flow_coeff(2);
  auto torr = [](double dh) {
    return (dh > 0 ? 1.0 : (dh < 0 ? -1.0 : 0.0)) * std::sqrt(std::abs(dh));
  };
  const double q13 = c1 * torr(x[0] - x[2]);
  const double q32 = c3 * torr(x[2] - x[1]);
  const double q20 = c2 * torr(x[1]);
  return {-q13 + u[0] / p.tank_section,
          q32 - q20 + u[1] / p.tank_section,
          q13 - q32};
}

class ThreeTankPlant : public Plant {
public:
  explicit ThreeTankPlant(const ThreeTankParams& params = {},
                          const std::array<double, 3>& initial_levels = {0.1, 0.1, 0.1})
      : params_(params), x_(initial_levels) {}

  int num_inputs() const override { return 2; }
  int num_outputs() const override { return 3; }

  std::vector<double> outputs() const override { return {x_[0], x_[1], x_[2]}; }
  const std::array<double, 3>& levels() const { return x_; }
  const ThreeTankParams& params() const { return params_; }

  void step(const std::vector<double>& u, double dt, int substeps) override {
    if (u.size() != 2) throw std::invalid_argument("three-tank: expects 2 inputs");
    const std::array<double, 2> uu{u[0], u[1]};
    const double hs = dt / substeps;
    for (int s = 0; s < substeps; ++s) {
      const auto before = signs();
      const auto k1 = three_tank_field(x_, uu, params_);
      const auto k2 = three_tank_field(advance(x_, k1, 0.5 * hs), uu, params_);
      const auto k3 = three_tank_field(advance(x_, k2, 0.5 * hs), uu, params_);
      const auto k4 = three_tank_field(advance(x_, k3, hs), uu, params_);
      for (int i = 0; i < 3; ++i)
        x_[i] += hs / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      for (int i = 0; i < 3; ++i) {
        if (x_[i] < 0.0) {
          max_undershoot_ = std::max(max_undershoot_, -x_[i]);
          x_[i] = 0.0;
          ++clamp_count_;
        }
      }
      if (before != signs()) ++sign_crossings_;
    }
  }

  std::vector<double> output_derivative(int order,
                                        const std::vector<double>& u_held) const override {
    if (order != 1)
      throw std::invalid_argument("three-tank: only first output derivatives exist");
    const auto dx = three_tank_field(x_, {u_held[0], u_held[1]}, params_);
    return {dx[0], dx[1], dx[2]};
  }

  PlantMetadata metadata() const override {
    return PlantMetadata{{1, 1, 1}, {false, false, false}};
  }

  long clamp_count() const { return clamp_count_; }
  long sign_crossings() const { return sign_crossings_; }
  double max_undershoot() const { return max_undershoot_; }

private:
  static std::array<double, 3> advance(const std::array<double, 3>& x,
                                       const std::array<double, 3>& k, double s) {
    return {x[0] + s * k[0], x[1] + s * k[1], x[2] + s * k[2]};
  }
  std::array<int, 3> signs() const {
    auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    return {sgn(x_[0] - x_[2]), sgn(x_[2] - x_[1]), sgn(x_[1])};
  }

  ThreeTankParams params_;
  std::array<double, 3> x_{};
  long clamp_count_ = 0;
  long sign_crossings_ = 0;
  double max_undershoot_ = 0.0;
};

// Steady state for constant pump flows, from the flow balances:
//   C1 sqrt(x1-x3) = u1/S,  C3 sqrt(x3-x2) = u1/S,  C2 sqrt(x2) = (u1+u2)/S
inline std::array<double, 3> three_tank_equilibrium(const std::array<double, 2>& u,
                                                    const ThreeTankParams& p) {
  const double s = p.tank_section;
  const double q1 = u[0] / s, qo = (u[0] + u[1]) / s;
  if (q1 < 0 || qo < 0)
    throw std::invalid_argument("three-tank equilibrium: pump flows must be >= 0");
  const double x2 = (qo / p.flow_coeff(1)) * (qo / p.flow_coeff(1));
  const double x3 = x2 + (q1 / p.flow_coeff(2)) * (q1 / p.flow_coeff(2));
  const double x1 = x3 + (q1 / p.flow_coeff(0)) * (q1 / p.flow_coeff(0));
  return {x1, x2, x3};
}

} // namespace mfc::plants
