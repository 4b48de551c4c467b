#pragma once
// Leaky integrate-and-fire neuron, forward Euler.
// Units: seconds, mV, MOhm, nA (so r_m * i is in mV).

#include <utility>

#include "edgesnn/kernels/kernels.hpp"

namespace edgesnn::snn {

struct LifParams {
  double tau_m = 10e-3;
  double v_rest = -65.0;
  double v_reset = -70.0;
  double v_th = -50.0;
  double r_m = 10.0;
  double t_ref = 2e-3;
  double dt = 0.1e-3;

  // Throws ConfigError listing the violated constraints.
  void validate() const;
  kernels::LifKernelParams kernel_params() const { return {v_rest, v_reset, v_th, r_m, tau_m, dt}; }
};

struct NeuronState {
  double v = -65.0;
  double refractory_until = 0.0;
  int spike_count = 0;
};

struct LifStep {
  NeuronState state;
  bool spiked = false;
};

LifStep lif_step(NeuronState state, double i_in, const LifParams& params, double now);

}  // namespace edgesnn::snn
