#pragma once

// Closed-loop harness: plant stepping, measurement noise, derivative
// estimation, F identification, control, logging. The per-tick order is
// fixed so that u(k) only ever sees measurements up to k and controls up to
// k-1.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mfc/control.hpp"
#include "mfc/differentiator.hpp"
#include "mfc/plants/first_order.hpp"
#include "mfc/plants/linear_mimo.hpp"
#include "mfc/plants/three_tank.hpp"
#include "mfc/ring_buffer.hpp"
#include "mfc/trajectory.hpp"
#include "mfc/ultra_local.hpp"

namespace mfc {

enum class ControlMode { model_free, classic_pid };

// `plant` bypasses the algebraic estimator and reads exact output
// derivatives from the simulator; for harness verification only.
enum class DerivativeSource { estimator, plant };

struct ChannelEstimatorConfig {
  int taylor_order = 1;
  int integration_order = 3;
  double window_length = 0.5;
};

struct ChannelConfig {
  int output_index = 0; // which plant output this channel tracks
  UltraLocalChannel model;
  PidGains gains;
  std::optional<double> u_min;
  std::optional<double> u_max;
  ChannelEstimatorConfig estimator;
};

struct ThreeTankScenarioConfig {
  plants::ThreeTankParams params{};
  std::array<double, 3> initial_levels{0.1, 0.1, 0.1};
};

using PlantConfig = std::variant<plants::LinearMimoConfig, ThreeTankScenarioConfig,
                                 plants::FirstOrderConfig>;

struct Scenario {
  std::string name = "scenario";
  PlantConfig plant;
  std::vector<ChannelConfig> channels;
  std::vector<ReferenceProfile> references; // one per channel
  double control_period = 0.01; // h [s]
  double duration = 40.0;       // [s]
  std::vector<double> noise_std; // per plant output; empty means noiseless
  std::uint64_t seed = 1;
  ControlMode mode = ControlMode::model_free;
  DerivativeSource derivative_source = DerivativeSource::estimator;
  int rk_substeps = 10;
  double divergence_limit = 1e6;
};

struct ChannelSeries {
  int n = 1;
  std::vector<double> ref, dref, y_true, y_meas, y_denoised, dy_est, F, e;
  std::vector<double> ddy_est; // present when n == 2
};

struct TimeSeries {
  std::vector<double> t;
  std::vector<ChannelSeries> channels;
  std::vector<std::vector<double>> u; // per input
  bool diverged = false;
  double warmup_time = 0.0;
  std::uint64_t seed = 0;
  std::size_t ticks() const { return t.size(); }
};

inline std::unique_ptr<plants::Plant> make_plant(const PlantConfig& cfg) {
  if (const auto* lin = std::get_if<plants::LinearMimoConfig>(&cfg))
    return std::make_unique<plants::LinearMimoPlant>(*lin);
  if (const auto* tank = std::get_if<ThreeTankScenarioConfig>(&cfg))
    return std::make_unique<plants::ThreeTankPlant>(tank->params, tank->initial_levels);
  return std::make_unique<plants::FirstOrderPlant>(std::get<plants::FirstOrderConfig>(cfg));
}

namespace detail {

inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("MFC_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 1) std::fprintf(stderr, "[mfc] %s\n", msg.c_str());
}

} // namespace detail

// Throws on structural problems; the loop refuses to start on a scenario
// that is not square, not aligned, or under-smooth.
inline void validate_scenario(const Scenario& sc) {
  auto plant = make_plant(sc.plant);
  const int m = plant->num_inputs();
  const int p = plant->num_outputs();
  if (static_cast<int>(sc.channels.size()) != m)
    throw std::invalid_argument("scenario: needs exactly one channel per plant input");
  if (sc.references.size() != sc.channels.size())
    throw std::invalid_argument("scenario: needs one reference profile per channel");
  if (!(sc.control_period > 0.0))
    throw std::invalid_argument("scenario: control period must be > 0");
  if (!(sc.duration > 0.0)) throw std::invalid_argument("scenario: duration must be > 0");
  if (!sc.noise_std.empty() && static_cast<int>(sc.noise_std.size()) != p)
    throw std::invalid_argument("scenario: noise std list must match plant outputs");
  for (double s : sc.noise_std)
    if (s < 0.0) throw std::invalid_argument("scenario: noise std must be >= 0");
  if (sc.rk_substeps < 1) throw std::invalid_argument("scenario: rk_substeps must be >= 1");

  SquareSelection selection;
  std::vector<bool> input_taken(static_cast<std::size_t>(m), false);
  double max_window = 0.0;
  for (std::size_t k = 0; k < sc.channels.size(); ++k) {
    const auto& ch = sc.channels[k];
    selection.selected_outputs.push_back(ch.output_index);
    ch.model.validate();
    if (static_cast<int>(ch.model.alpha.size()) != m)
      throw std::invalid_argument("scenario: channel alpha row must have one gain per input");
    if (input_taken[static_cast<std::size_t>(ch.model.input_index)])
      throw std::invalid_argument("scenario: two channels drive the same input");
    input_taken[static_cast<std::size_t>(ch.model.input_index)] = true;
    if (ch.model.alpha_diagonal() == 0.0)
      throw std::invalid_argument("scenario: channel has zero gain on its own input");
    if (ch.estimator.taylor_order < std::max(1, ch.model.derivative_order))
      throw std::invalid_argument(
          "scenario: estimator taylor order must cover the channel derivative order");
    if (sc.references[k].smoothness_order() < ch.model.derivative_order)
      throw std::invalid_argument(
          "scenario: reference smoothness below the channel derivative order");
    max_window = std::max(max_window, ch.estimator.window_length);
  }
  selection.validate(p);
  if (sc.derivative_source == DerivativeSource::estimator && sc.duration <= max_window)
    throw std::invalid_argument("scenario: duration must exceed the estimator warm-up window");
}

// Advisory configuration warnings (channel orders vs. what the plant
// declares). Never fatal.
inline std::vector<std::string> scenario_warnings(const Scenario& sc) {
  auto plant = make_plant(sc.plant);
  const auto meta = plant->metadata();
  std::vector<std::string> out;
  for (std::size_t k = 0; k < sc.channels.size(); ++k) {
    for (auto& w : validate_channel(sc.channels[k].model, meta, sc.channels[k].output_index))
      out.push_back("channel " + std::to_string(k + 1) + ": " + w);
  }
  return out;
}

inline TimeSeries run(const Scenario& sc) {
  validate_scenario(sc);
  auto plant = make_plant(sc.plant);
  const int m = plant->num_inputs();
  const int p = plant->num_outputs();
  const double h = sc.control_period;

  struct ChannelRuntime {
    const ChannelConfig* cfg = nullptr;
    UltraLocalChannel model;
    ChannelControllerState controller;
    std::optional<EstimatorKernel> kernel;
    std::optional<RingBuffer> ring;
  };
  std::vector<ChannelRuntime> rt(sc.channels.size());
  double warmup = 0.0;
  for (std::size_t k = 0; k < sc.channels.size(); ++k) {
    rt[k].cfg = &sc.channels[k];
    rt[k].model = sc.channels[k].model;
    rt[k].controller.gains = sc.channels[k].gains;
    rt[k].controller.u_min = sc.channels[k].u_min;
    rt[k].controller.u_max = sc.channels[k].u_max;
    if (sc.derivative_source == DerivativeSource::estimator) {
      const auto& e = sc.channels[k].estimator;
      rt[k].kernel = build_kernel({e.taylor_order, e.integration_order, e.window_length, h});
      rt[k].ring.emplace(rt[k].kernel->window_size());
      warmup = std::max(warmup, rt[k].kernel->spec().window_length + h);
    }
  }

  TimeSeries out;
  out.seed = sc.seed;
  out.warmup_time = warmup;
  out.channels.resize(sc.channels.size());
  for (std::size_t k = 0; k < sc.channels.size(); ++k)
    out.channels[k].n = sc.channels[k].model.derivative_order;
  out.u.assign(static_cast<std::size_t>(m), {});

  std::mt19937_64 rng(sc.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto n_ticks = static_cast<std::size_t>(std::llround(sc.duration / h)) + 1;
  std::vector<double> u_prev(static_cast<std::size_t>(m), 0.0);
  std::vector<double> u_now(static_cast<std::size_t>(m), 0.0);

  for (std::size_t tick = 0; tick < n_ticks; ++tick) {
    const double t = static_cast<double>(tick) * h;
    const auto y_true = plant->outputs();
    std::vector<double> y_meas(y_true);
    for (int j = 0; j < p; ++j) {
      const double std_j = sc.noise_std.empty() ? 0.0 : sc.noise_std[static_cast<std::size_t>(j)];
      y_meas[static_cast<std::size_t>(j)] += std_j * gauss(rng);
    }

    // exact derivatives are evaluated under the input still held from the
    // previous period
    std::vector<double> plant_d1, plant_d2;
    if (sc.derivative_source == DerivativeSource::plant) {
      plant_d1 = plant->output_derivative(1, u_prev);
      bool need_second = false;
      for (const auto& ch : sc.channels) need_second |= ch.model.derivative_order >= 2;
      if (need_second) plant_d2 = plant->output_derivative(2, u_prev);
    }

    bool out_of_range = false;
    for (double y : y_true) out_of_range |= !(std::abs(y) <= sc.divergence_limit);

    for (std::size_t k = 0; k < rt.size(); ++k) {
      auto& c = rt[k];
      const auto j = static_cast<std::size_t>(c.cfg->output_index);
      const int n = c.model.derivative_order;

      double denoised = y_meas[j], d1 = 0.0, d2 = 0.0;
      bool warm = false;
      if (sc.derivative_source == DerivativeSource::plant) {
        denoised = y_true[j];
        d1 = plant_d1[j];
        if (!plant_d2.empty()) d2 = plant_d2[j];
      } else {
        c.ring->push(y_meas[j]);
        if (c.ring->full()) {
          const SignalWindow win{c.ring->ordered(), h};
          const auto est = estimate_at_now(*c.kernel, win);
          denoised = est[0];
          d1 = est[1];
          if (c.kernel->max_order() >= 2) d2 = est[2];
        } else {
          warm = true; // derivative estimates stay 0, F stays 0
        }
      }

      double F_est = 0.0;
      if (warm) {
        c.model.last_F = 0.0;
      } else {
        F_est = estimate_F(c.model, n == 1 ? d1 : d2, u_prev);
      }
      const double F_used = (sc.mode == ControlMode::classic_pid) ? 0.0 : F_est;

      const auto refs = sc.references[k].eval(t);
      const double e = refs[0] - denoised;
      const double e_dot = refs[1] - d1;
      const double u =
          compute_control(c.controller, c.model, refs[static_cast<std::size_t>(n)],
                          F_used, e, e_dot, h);
      u_now[static_cast<std::size_t>(c.model.input_index)] = u;

      auto& log = out.channels[k];
      log.ref.push_back(refs[0]);
      log.dref.push_back(refs[1]);
      log.y_true.push_back(y_true[j]);
      log.y_meas.push_back(y_meas[j]);
      log.y_denoised.push_back(denoised);
      log.dy_est.push_back(d1);
      log.F.push_back(F_used);
      log.e.push_back(e);
      if (n == 2) log.ddy_est.push_back(d2);
    }

    out.t.push_back(t);
    for (int i = 0; i < m; ++i)
      out.u[static_cast<std::size_t>(i)].push_back(u_now[static_cast<std::size_t>(i)]);

    for (double u : u_now) out_of_range |= !(std::abs(u) <= sc.divergence_limit);
    if (out_of_range) {
      out.diverged = true;
      detail::log_info("divergence guard tripped at t=" + std::to_string(t));
      break;
    }

    if (tick + 1 < n_ticks) {
      plant->step(u_now, h, sc.rk_substeps);
      u_prev = u_now;
    }
  }
  return out;
}

// Root-mean-square tracking error of the true output against its reference,
// per channel, over t >= warmup_time.
inline std::vector<double> post_warmup_rmse(const TimeSeries& series) {
  std::vector<double> rmse(series.channels.size(), 0.0);
  for (std::size_t k = 0; k < series.channels.size(); ++k) {
    const auto& ch = series.channels[k];
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      if (series.t[i] < series.warmup_time) continue;
      const double err = ch.y_true[i] - ch.ref[i];
      acc += err * err;
      ++count;
    }
    rmse[k] = count ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
  }
  return rmse;
}

struct CompareResult {
  TimeSeries model_free;
  TimeSeries classic;
  std::vector<double> rmse_model_free;
  std::vector<double> rmse_classic;
};

// Same scenario, same seed, with and without the F cancellation.
inline CompareResult compare(const Scenario& sc) {
  CompareResult result;
  Scenario mf = sc;
  mf.mode = ControlMode::model_free;
  result.model_free = run(mf);
  Scenario cl = sc;
  cl.mode = ControlMode::classic_pid;
  result.classic = run(cl);
  result.rmse_model_free = post_warmup_rmse(result.model_free);
  result.rmse_classic = post_warmup_rmse(result.classic);
  return result;
}

namespace detail {
inline void append_number(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}
} // namespace detail

// Column layout: t, then per channel ref, dref, y_true, y_meas, y_denoised,
// dy_est, F, e (+ ddy_est for second-order channels), then one column per
// input.
inline void export_csv(const TimeSeries& series, std::ostream& os) {
  std::string header = "t";
  for (std::size_t k = 0; k < series.channels.size(); ++k) {
    const std::string sfx = "_" + std::to_string(k + 1);
    for (const char* name :
         {"ref", "dref", "y_true", "y_meas", "y_denoised", "dy_est", "F", "e"})
      header += "," + std::string(name) + sfx;
    if (series.channels[k].n == 2) header += ",ddy_est" + sfx;
  }
  for (std::size_t i = 0; i < series.u.size(); ++i)
    header += ",u_" + std::to_string(i + 1);
  os << header << "\n";

  for (std::size_t row = 0; row < series.t.size(); ++row) {
    std::string line;
    detail::append_number(line, series.t[row]);
    for (const auto& ch : series.channels) {
      for (const auto* col :
           {&ch.ref, &ch.dref, &ch.y_true, &ch.y_meas, &ch.y_denoised, &ch.dy_est,
            &ch.F, &ch.e}) {
        line += ',';
        detail::append_number(line, (*col)[row]);
      }
      if (ch.n == 2) {
        line += ',';
        detail::append_number(line, ch.ddy_est[row]);
      }
    }
    for (const auto& u : series.u) {
      line += ',';
      detail::append_number(line, u[row]);
    }
    os << line << "\n";
  }
}

inline void export_csv(const TimeSeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_csv: cannot open " + path);
  export_csv(series, os);
  if (!os.good()) throw std::runtime_error("export_csv: write failed for " + path);
}

} // namespace mfc
