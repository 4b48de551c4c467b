#pragma once

namespace edgesnn::snn {

struct StdpParams {
  double a_plus = 0.01;
  double a_minus = 0.01;
  double tau_plus = 20e-3;
  double tau_minus = 20e-3;
  double w_min = 0.0;
  double w_max = 1.0;
  double trace_decay_tau = 25e-3;
  double learning_rate = 1.0;

  void validate() const;
};

// Pair-based STDP kernel, dt = t_post - t_pre. Zero at coincidence.
double stdp_delta(double dt_pre_post, const StdpParams& params);

}  // namespace edgesnn::snn
