#pragma once

// Per-channel phenomenological model y^(n) = F + alpha . u + beta, valid over
// one sampling period and refreshed from data every step. F absorbs whatever
// the real plant does beyond the practitioner-chosen input gains.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfc {

struct UltraLocalChannel {
  int derivative_order = 1;       // n_j, usually 1 or 2
  std::vector<double> alpha;      // input gains, one per plant input
  double beta = 0.0;
  int input_index = 0;            // the input this channel drives (diagonal entry)
  double last_F = 0.0;

  double alpha_diagonal() const { return alpha.at(static_cast<std::size_t>(input_index)); }

  void validate() const {
    if (derivative_order < 1)
      throw std::invalid_argument("ultra-local channel: derivative order must be >= 1");
    bool any = false;
    for (double a : alpha) any = any || a != 0.0;
    if (!any)
      throw std::invalid_argument("ultra-local channel: all alpha gains are zero (no control authority)");
    if (input_index < 0 || static_cast<std::size_t>(input_index) >= alpha.size())
      throw std::invalid_argument("ultra-local channel: input index out of range");
  }
};

// Keeps m of p outputs so the controlled system is square.
struct SquareSelection {
  std::vector<int> selected_outputs;

  void validate(int num_outputs) const {
    for (std::size_t a = 0; a < selected_outputs.size(); ++a) {
      if (selected_outputs[a] < 0 || selected_outputs[a] >= num_outputs)
        throw std::invalid_argument("square selection: output index out of range");
      for (std::size_t b = a + 1; b < selected_outputs.size(); ++b)
        if (selected_outputs[a] == selected_outputs[b])
          throw std::invalid_argument("square selection: duplicate output index");
    }
  }
};

// What a plant is willing to declare about itself, for advisory checks only.
// The control method does not rely on it.
struct PlantMetadata {
  std::vector<int> output_orders;        // highest output derivative per channel
  std::vector<bool> input_nonlinear;     // true where the input enters nonlinearly
};

// F(k) = [y^(n)](k) - sum_i alpha_i u_i(k-1) - beta. The control applied over
// the PREVIOUS period enters here, never the current one; that one-step lag
// is what keeps the loop free of algebraic feedback.
inline double estimate_F(UltraLocalChannel& channel, double y_nj_estimate,
                         const std::vector<double>& u_prev) {
  if (u_prev.size() != channel.alpha.size())
    throw std::invalid_argument("estimate_F: control vector size " +
                                std::to_string(u_prev.size()) + " does not match alpha (" +
                                std::to_string(channel.alpha.size()) + ")");
  double acc = y_nj_estimate - channel.beta;
  for (std::size_t i = 0; i < u_prev.size(); ++i) acc -= channel.alpha[i] * u_prev[i];
  channel.last_F = acc;
  return acc;
}

// Advisory sanity check of the channel configuration against whatever the
// plant declares. Warnings only; the premise is that the plant is unknown.
inline std::vector<std::string> validate_channel(const UltraLocalChannel& channel,
                                                 const PlantMetadata& metadata,
                                                 int output_index = 0) {
  std::vector<std::string> warnings;
  if (output_index >= 0 &&
      static_cast<std::size_t>(output_index) < metadata.output_orders.size() &&
      channel.derivative_order > metadata.output_orders[output_index]) {
    warnings.push_back("channel derivative order " + std::to_string(channel.derivative_order) +
                       " exceeds declared plant order " +
                       std::to_string(metadata.output_orders[output_index]));
  }
  if (output_index >= 0 &&
      static_cast<std::size_t>(output_index) < metadata.input_nonlinear.size() &&
      metadata.input_nonlinear[output_index] && channel.beta == 0.0) {
    warnings.push_back("beta is zero but the plant is flagged input-nonlinear; "
                       "a nonzero beta is recommended");
  }
  return warnings;
}

} // namespace mfc
