#include "edgesnn/snn/encoding.hpp"

#include <cmath>
#include <string>

#include "edgesnn/errors.hpp"

namespace edgesnn::snn {

std::string_view to_string(Encoder e) noexcept {
  switch (e) {
    case Encoder::rate_deterministic: return "rate";
    case Encoder::rate_poisson: return "poisson";
    case Encoder::temporal: return "temporal";
  }
  return "unknown";
}

Encoder encoder_from_string(std::string_view name) {
  for (Encoder e : {Encoder::rate_deterministic, Encoder::rate_poisson, Encoder::temporal})
    if (name == to_string(e)) return e;
  throw ConfigError("unknown encoder '" + std::string(name) + "' (expected rate, poisson or temporal)");
}

namespace {
void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("encoder input " + std::to_string(x) + " outside [0,1]");
}
}  // namespace

std::vector<double> encode_rate(double x, double window, double f_max, RateMode mode, Rng& rng) {
  check_unit(x);
  if (!(f_max > 0.0)) throw DomainError("f_max must be > 0");
  std::vector<double> spikes;
  const double rate = x * f_max;
  if (rate == 0.0 || window <= 0.0) return spikes;

  if (mode == RateMode::deterministic) {
    // Absorb representation error so that e.g. 1.0 * 200 Hz * 0.05 s yields 10.
    const auto n = static_cast<std::size_t>(std::floor(rate * window + 1e-9));
    spikes.reserve(n);
    for (std::size_t k = 0; k < n; ++k) spikes.push_back(window * static_cast<double>(k) / static_cast<double>(n));
    return spikes;
  }

  std::exponential_distribution<double> gap(rate);
  for (double t = gap(rng); t < window; t += gap(rng)) spikes.push_back(t);
  return spikes;
}

double encode_temporal(double x, double window) {
  check_unit(x);
  return window * (1.0 - x);
}

}  // namespace edgesnn::snn
