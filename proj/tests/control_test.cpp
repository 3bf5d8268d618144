#include "mfc/control.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"

using mfc::ChannelControllerState;
using mfc::PidGains;
using mfc::UltraLocalChannel;
using mfc::compute_control;
using mfc::reset;

namespace {
UltraLocalChannel channel_with_alpha(double a) { return UltraLocalChannel{1, {a}, 0.0, 0}; }
} // namespace

TEST(ComputeControl, EquilibriumGivesZero) {
  ChannelControllerState st;
  st.gains = {1.0, 0.5, 0.1};
  auto ch = channel_with_alpha(10.0);
  EXPECT_DOUBLE_EQ(compute_control(st, ch, 2.0, 2.0, 0.0, 0.0, 0.01), 0.0);
}

TEST(ComputeControl, ZeroAlphaIsConfigurationError) {
  ChannelControllerState st;
  UltraLocalChannel ch{1, {0.0, 1.0}, 0.0, 0}; // diagonal entry zero
  EXPECT_THROW(compute_control(st, ch, 0, 0, 0, 0, 0.01), std::invalid_argument);
}

// Proportional-only channel: u = (1/10)(y*' - F + Kp e)
TEST(ComputeControl, ProportionalChannelArithmetic) {
  ChannelControllerState st;
  st.gains = {1.0, 0.0, 0.0};
  auto ch = channel_with_alpha(10.0);
  const double u = compute_control(st, ch, 0.0, 2.5, 0.3, 0.0, 0.01);
  EXPECT_NEAR(u, -0.22, 1e-15);
}

// PI channel at tank scales: u = (1/200)(y*' - F + 10 e + 0.02 int(e))
TEST(ComputeControl, PiChannelArithmetic) {
  ChannelControllerState st;
  st.gains = {10.0, 0.02, 0.0};
  auto ch = channel_with_alpha(200.0);
  const double dt = 0.1;
  const double u = compute_control(st, ch, 0.001, 0.0005, 0.01, 0.0, dt);
  // trapezoid integral advance from last_e = 0: (0 + 0.01)/2 * dt
  const double integral = 0.5 * 0.01 * dt;
  const double expected = (0.001 - 0.0005 + 10.0 * 0.01 + 0.02 * integral) / 200.0;
  EXPECT_DOUBLE_EQ(u, expected);
  EXPECT_NEAR(u, 5.025e-4, 1e-6);
}

TEST(Reset, ClearsStateAndIsIdempotent) {
  ChannelControllerState st;
  st.gains = {2.0, 1.0, 0.0};
  auto ch = channel_with_alpha(10.0);
  compute_control(st, ch, 0.0, 0.0, 1.0, 0.0, 0.1);
  EXPECT_NE(st.integral_e, 0.0);
  reset(st);
  EXPECT_DOUBLE_EQ(st.integral_e, 0.0);
  EXPECT_DOUBLE_EQ(st.last_u, 0.0);
  reset(st);
  EXPECT_DOUBLE_EQ(st.integral_e, 0.0);
  EXPECT_DOUBLE_EQ(compute_control(st, ch, 1.0, 1.0, 0.0, 0.0, 0.1), 0.0);
}

// k steps of constant error: trapezoid sum is k*e*dt - e*dt/2 (half step at
// the leading edge).
TEST(ComputeControl, TrapezoidIntegralClosedForm) {
  ChannelControllerState st;
  st.gains = {0.0, 1.0, 0.0};
  auto ch = channel_with_alpha(1.0);
  const double e = 0.4, dt = 0.05;
  const int k = 25;
  for (int i = 0; i < k; ++i) compute_control(st, ch, 0.0, 0.0, e, 0.0, dt);
  EXPECT_NEAR(st.integral_e, k * e * dt - 0.5 * e * dt, 1e-14);
}

TEST(ComputeControl, SaturationClampsAndFreezesIntegral) {
  ChannelControllerState st;
  st.gains = {1.0, 1.0, 0.0};
  st.u_min = -0.5;
  st.u_max = 0.5;
  auto ch = channel_with_alpha(1.0);
  double integral_at_saturation = -1.0;
  for (int i = 0; i < 50; ++i) {
    const double u = compute_control(st, ch, 0.0, 0.0, 2.0, 0.0, 0.1);
    EXPECT_LE(u, 0.5);
    EXPECT_GE(u, -0.5);
    EXPECT_DOUBLE_EQ(u, 0.5); // persistent demand beyond the bound
    if (integral_at_saturation < 0.0) integral_at_saturation = st.integral_e;
    EXPECT_DOUBLE_EQ(st.integral_e, integral_at_saturation); // frozen
  }
}

TEST(ComputeControl, InvertedBoundsRejected) {
  ChannelControllerState st;
  st.u_min = 1.0;
  st.u_max = -1.0;
  auto ch = channel_with_alpha(1.0);
  EXPECT_THROW(compute_control(st, ch, 0, 0, 0, 0, 0.1), std::invalid_argument);
}

// With exact F and Ki = Kd = 0 the matched closed loop obeys e' = -Kp e.
TEST(ComputeControl, MatchedPlantErrorDecaysAtKp) {
  const double alpha = 10.0, kp = 2.0, h = 1e-3;
  ChannelControllerState st;
  st.gains = {kp, 0.0, 0.0};
  auto ch = channel_with_alpha(alpha);

  const double F_true = 1.7, ref = 1.0;
  double y = 0.0;
  std::vector<double> ts, es;
  for (int k = 0; k < 4000; ++k) {
    const double e = ref - y;
    ts.push_back(k * h);
    es.push_back(e);
    const double u = compute_control(st, ch, 0.0, F_true, e, 0.0, h);
    y += h * (F_true + alpha * u); // plant y' = F + alpha u, ZOH input
  }
  const double rate = testutil::log_decay_rate(ts, es, 100, 3000);
  EXPECT_NEAR(rate, kp, 0.05 * kp);
}

// n = 2 cancellation: with exact F the tracking error obeys
// e'' + Kd e' + Kp e + Ki int(e) = 0; compare the loop against an
// independent integration of that ODE.
TEST(ComputeControl, SecondOrderCancellationLaw) {
  const double alpha = 10.0, h = 1e-4;
  const PidGains g{50.0, 50.0, 10.0};
  ChannelControllerState st;
  st.gains = g;
  UltraLocalChannel ch{2, {alpha}, 0.0, 0};

  // matched plant y'' = F(t) + alpha u with a wandering F
  auto F_true = [](double t) { return 0.8 + 0.3 * std::sin(2.0 * t); };
  double y = 1.0, yd = 0.0; // initial error e = -1 against ref 0
  std::vector<double> e_loop, t_axis;
  const int steps = 30000;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const double e = 0.0 - y, e_dot = 0.0 - yd;
    const double u = compute_control(st, ch, 0.0, F_true(t), e, e_dot, h);
    // integrate one step with u held (RK4 on [y, yd])
    auto f = [&](double, double yv, double ydv) {
      (void)yv;
      return std::pair<double, double>{ydv, F_true(t) + alpha * u};
    };
    // F held constant over the substep to match what the controller cancelled
    const auto [k1y, k1d] = f(t, y, yd);
    const auto [k2y, k2d] = f(t, y + 0.5 * h * k1y, yd + 0.5 * h * k1d);
    const auto [k3y, k3d] = f(t, y + 0.5 * h * k2y, yd + 0.5 * h * k2d);
    const auto [k4y, k4d] = f(t, y + h * k3y, yd + h * k3d);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    yd += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    e_loop.push_back(0.0 - y);
    t_axis.push_back(t);
  }

  // reference: e'' = -Kd e' - Kp e - Ki I, I' = e, from e(0) = -1
  double e_ref = -1.0, ed = 0.0, I = 0.0;
  double max_dev = 0.0, max_mag = 0.0;
  for (int k = 0; k < steps; ++k) {
    auto deriv = [&](double ev, double edv, double Iv) {
      return std::array<double, 3>{edv, -g.kd * edv - g.kp * ev - g.ki * Iv, ev};
    };
    const auto k1 = deriv(e_ref, ed, I);
    const auto k2 = deriv(e_ref + 0.5 * h * k1[0], ed + 0.5 * h * k1[1], I + 0.5 * h * k1[2]);
    const auto k3 = deriv(e_ref + 0.5 * h * k2[0], ed + 0.5 * h * k2[1], I + 0.5 * h * k2[2]);
    const auto k4 = deriv(e_ref + h * k3[0], ed + h * k3[1], I + h * k3[2]);
    e_ref += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    ed += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    I += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    max_dev = std::max(max_dev, std::abs(e_loop[k] - e_ref));
    max_mag = std::max(max_mag, std::abs(e_ref));
  }
  EXPECT_LT(max_dev, 0.05 * max_mag);
}

// Ki = Kd = 0 reduces the law to the pure proportional form.
TEST(ComputeControl, GainZeroDegeneracy) {
  ChannelControllerState st;
  st.gains = {1.0, 0.0, 0.0};
  auto ch = channel_with_alpha(10.0);
  for (double e : {-0.4, 0.0, 0.9}) {
    ChannelControllerState fresh = st;
    const double u = compute_control(fresh, ch, 0.3, 0.1, e, 123.0, 0.01);
    EXPECT_DOUBLE_EQ(u, (0.3 - 0.1 + e) / 10.0);
  }
}
