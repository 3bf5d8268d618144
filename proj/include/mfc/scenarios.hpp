#pragma once

// Canned benchmark scenarios. These are the reference fixtures: plant
// constants, channel gains and model coefficients are the published
// benchmark values; windows, references and noise levels are calibrated
// defaults and can be overridden through the config file.

#include "mfc/simloop.hpp"

namespace mfc::scenarios {

// Two-by-two linear plant with unstable poles across a wide spectrum.
// Decoupled channel models y1' = F1 + 10 u1, y2'' = F2 + 10 u2 with
// PID gains (1, 0, 0) and (50, 50, 10); measurement noise std 0.1.
inline Scenario linear_2x2() {
  Scenario sc;
  sc.name = "linear-2x2";
  sc.plant = plants::linear_2x2_config();

  // Short estimation windows: the increment-style control loop crosses over
  // near 1/(alpha h) = 10 rad/s, so the estimators must stay well ahead of
  // it. Larger windows smooth more but destabilize the n = 2 channel.
  ChannelConfig ch1;
  ch1.output_index = 0;
  ch1.model = UltraLocalChannel{1, {10.0, 0.0}, 0.0, 0};
  ch1.gains = {1.0, 0.0, 0.0};
  ch1.estimator = {1, 3, 0.2};

  ChannelConfig ch2;
  ch2.output_index = 1;
  ch2.model = UltraLocalChannel{2, {0.0, 10.0}, 0.0, 1};
  ch2.gains = {50.0, 50.0, 10.0};
  ch2.estimator = {2, 4, 0.1};

  sc.channels = {ch1, ch2};
  sc.references.emplace_back(0.0, std::vector<ReferenceSegment>{{5.0, 0.0, 10.0, 2.0},
                                                                {22.0, 2.0, 27.0, 1.0}},
                             2);
  sc.references.emplace_back(0.0, std::vector<ReferenceSegment>{{8.0, 0.0, 14.0, 2.0},
                                                                {26.0, 2.0, 32.0, 0.6}},
                             2);
  sc.control_period = 0.01;
  sc.duration = 40.0;
  sc.noise_std = {0.1, 0.1};
  sc.seed = 1789;
  return sc;
}

// Three coupled tanks, pumps on tanks 1 and 2, levels 1 and 2 controlled
// (square selection of two of the three outputs). Channel models
// y_i' = F_i + 200 u_i with PI gains (10, 0.02); pump flows saturate at
// [0, 1e-4] m^3/s. Level sensor noise std 1 mm.
inline Scenario three_tank() {
  Scenario sc;
  sc.name = "three-tank";
  sc.plant = ThreeTankScenarioConfig{};

  ChannelConfig ch1;
  ch1.output_index = 0;
  ch1.model = UltraLocalChannel{1, {200.0, 0.0}, 0.0, 0};
  ch1.gains = {10.0, 0.02, 0.0};
  ch1.u_min = 0.0;
  ch1.u_max = 1e-4;
  ch1.estimator = {1, 3, 1.0};

  ChannelConfig ch2 = ch1;
  ch2.output_index = 1;
  ch2.model = UltraLocalChannel{1, {0.0, 200.0}, 0.0, 1};

  sc.channels = {ch1, ch2};
  sc.references.emplace_back(0.1, std::vector<ReferenceSegment>{{50.0, 0.1, 350.0, 0.3}}, 2);
  sc.references.emplace_back(0.1, std::vector<ReferenceSegment>{{50.0, 0.1, 350.0, 0.2}}, 2);
  sc.control_period = 0.1;
  sc.duration = 400.0;
  sc.noise_std = {0.001, 0.001, 0.001};
  sc.seed = 3154;
  return sc;
}

} // namespace mfc::scenarios
