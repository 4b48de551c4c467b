#include "edgesnn/snn/stdp.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "edgesnn/errors.hpp"

namespace edgesnn::snn {

void StdpParams::validate() const {
  std::vector<std::string> bad;
  if (!(a_plus > 0.0)) bad.emplace_back("stdp: a_plus must be > 0");
  if (!(a_minus > 0.0)) bad.emplace_back("stdp: a_minus must be > 0");
  if (!(tau_plus > 0.0)) bad.emplace_back("stdp: tau_plus must be > 0");
  if (!(tau_minus > 0.0)) bad.emplace_back("stdp: tau_minus must be > 0");
  if (!(trace_decay_tau > 0.0)) bad.emplace_back("stdp: trace_decay_tau must be > 0");
  if (!(learning_rate > 0.0)) bad.emplace_back("stdp: learning_rate must be > 0");
  if (!(w_min < w_max)) bad.emplace_back("stdp: w_min must be < w_max");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

double stdp_delta(double dt, const StdpParams& p) {
  if (dt > 0.0) return p.a_plus * std::exp(-dt / p.tau_plus);
  if (dt < 0.0) return -p.a_minus * std::exp(dt / p.tau_minus);
  return 0.0;
}

}  // namespace edgesnn::snn
