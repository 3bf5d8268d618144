#pragma once

#include <vector>

#include "mfc/ultra_local.hpp"

namespace mfc::plants {

// Ground-truth simulator interface. Only the harness sees this; the
// controller works from measurements alone.
class Plant {
public:
  virtual ~Plant() = default;
  virtual int num_inputs() const = 0;
  virtual int num_outputs() const = 0;
  virtual std::vector<double> outputs() const = 0;
  // Advance by dt with u held constant, integrating in `substeps` RK4 stages.
  virtual void step(const std::vector<double>& u, double dt, int substeps) = 0;
  // Time derivative of the outputs (order 1 or 2) under a held input.
  virtual std::vector<double> output_derivative(int order,
                                                const std::vector<double>& u_held) const = 0;
  virtual PlantMetadata metadata() const = 0;
};

} // namespace mfc::plants
