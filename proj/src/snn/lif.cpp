#include "edgesnn/snn/lif.hpp"

#include <string>
#include <vector>

#include "edgesnn/errors.hpp"

namespace edgesnn::snn {

void LifParams::validate() const {
  std::vector<std::string> bad;
  if (!(v_reset <= v_rest)) bad.emplace_back("lif: v_reset must be <= v_rest");
  if (!(v_rest < v_th)) bad.emplace_back("lif: v_rest must be < v_th");
  if (!(tau_m > 0.0)) bad.emplace_back("lif: tau_m must be > 0");
  if (!(dt > 0.0)) bad.emplace_back("lif: dt must be > 0");
  if (!(dt <= tau_m / 10.0)) bad.emplace_back("lif: dt must be <= tau_m / 10");
  if (!(t_ref >= 0.0)) bad.emplace_back("lif: t_ref must be >= 0");
  if (!(r_m > 0.0)) bad.emplace_back("lif: r_m must be > 0");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

LifStep lif_step(NeuronState state, double i_in, const LifParams& params, double now) {
  if (now < state.refractory_until) return {state, false};
  state.v = state.v + (params.dt * (params.r_m * i_in - (state.v - params.v_rest))) / params.tau_m;
  if (state.v >= params.v_th) {
    state.v = params.v_reset;
    state.refractory_until = now + params.t_ref;
    ++state.spike_count;
    return {state, true};
  }
  return {state, false};
}

}  // namespace edgesnn::snn
