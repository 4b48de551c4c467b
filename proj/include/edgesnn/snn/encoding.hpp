#pragma once

#include <string_view>
#include <vector>

#include "edgesnn/core/rng.hpp"

namespace edgesnn::snn {

enum class Encoder { rate_deterministic, rate_poisson, temporal };

std::string_view to_string(Encoder e) noexcept;
// Throws ConfigError for unknown names.
Encoder encoder_from_string(std::string_view name);

enum class RateMode { deterministic, poisson };

// Rate code over [0, window): floor(x * f_max * window) evenly spaced spikes
// starting at 0, or a homogeneous Poisson train at rate x * f_max.
// Throws DomainError when x is outside [0, 1].
std::vector<double> encode_rate(double x, double window, double f_max, RateMode mode, Rng& rng);

// Latency code: one spike at window * (1 - x); larger values fire earlier.
double encode_temporal(double x, double window);

}  // namespace edgesnn::snn
