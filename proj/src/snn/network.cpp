#include "edgesnn/snn/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgesnn/errors.hpp"
#include "edgesnn/kernels/kernels.hpp"

namespace edgesnn::snn {

bool FeatureVector::in_range() const {
  for (double x : as_array())
    if (!(x >= 0.0 && x <= 1.0)) return false;
  return true;
}

std::string_view to_string(OutputCredit c) noexcept {
  switch (c) {
    case OutputCredit::all: return "all";
    case OutputCredit::winner: return "winner";
    case OutputCredit::contrast: return "contrast";
  }
  return "unknown";
}

OutputCredit output_credit_from_string(std::string_view name) {
  for (auto c : {OutputCredit::all, OutputCredit::winner, OutputCredit::contrast})
    if (name == to_string(c)) return c;
  throw ConfigError("unknown output_credit '" + std::string(name) + "' (expected all, winner or contrast)");
}

std::string_view to_string(RewardBaseline b) noexcept {
  switch (b) {
    case RewardBaseline::none: return "none";
    case RewardBaseline::mean: return "mean";
    case RewardBaseline::linear: return "linear";
    case RewardBaseline::venue: return "venue";
  }
  return "unknown";
}

RewardBaseline reward_baseline_from_string(std::string_view name) {
  for (auto b : {RewardBaseline::none, RewardBaseline::mean, RewardBaseline::linear, RewardBaseline::venue})
    if (name == to_string(b)) return b;
  throw ConfigError("unknown reward_baseline '" + std::string(name) + "' (expected none, mean, linear or venue)");
}

void NetworkConfig::validate() const {
  lif.validate();
  stdp.validate();
  std::vector<std::string> bad;
  if (!(window > 0.0)) bad.emplace_back("snn: window must be > 0");
  if (!(f_max > 0.0)) bad.emplace_back("snn: f_max must be > 0");
  if (!(kappa_na >= 0.0)) bad.emplace_back("snn: kappa_na must be >= 0");
  if (!(pulse >= lif.dt)) bad.emplace_back("snn: pulse must be >= dt");
  if (!(init_low >= 0.0 && init_low <= init_high && init_high <= 1.0))
    bad.emplace_back("snn: need 0 <= init_low <= init_high <= 1");
  if (!(reward_baseline_alpha > 0.0 && reward_baseline_alpha <= 1.0))
    bad.emplace_back("snn: reward_baseline_alpha must lie in (0,1]");
  for (auto h : hidden_layers)
    if (h == 0) bad.emplace_back("snn: hidden layers must be non-empty");
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

std::size_t NetworkConfig::steps_per_window() const {
  return static_cast<std::size_t>(std::llround(window / lif.dt));
}

SpikingNetwork::SpikingNetwork(NetworkConfig config, std::size_t n_inputs, Rng& init_rng)
    : config_(std::move(config)) {
  config_.validate();
  layers_.push_back(n_inputs);
  for (auto h : config_.hidden_layers) layers_.push_back(h);
  layers_.push_back(2);
  build_layout();
  const double span = config_.stdp.w_max;
  std::uniform_real_distribution<double> init(config_.init_low * span, config_.init_high * span);
  for (auto& w : weights_) w = std::clamp(init(init_rng), config_.stdp.w_min, config_.stdp.w_max);
}

SpikingNetwork::SpikingNetwork(NetworkConfig config, std::vector<std::size_t> layer_sizes,
                               std::vector<std::vector<double>> weights)
    : config_(std::move(config)), layers_(std::move(layer_sizes)) {
  config_.validate();
  if (layers_.size() < 2 || layers_.back() != 2)
    throw std::invalid_argument("network needs at least two layers and exactly 2 outputs");
  for (auto n : layers_)
    if (n == 0) throw std::invalid_argument("empty layer");
  build_layout();
  if (weights.size() != projections_.size()) throw std::invalid_argument("one weight matrix per projection required");
  for (std::size_t p = 0; p < projections_.size(); ++p) {
    const auto& pr = projections_[p];
    if (weights[p].size() != pr.pre_size * pr.post_size) throw std::invalid_argument("weight matrix size mismatch");
    for (std::size_t k = 0; k < weights[p].size(); ++k)
      weights_[pr.offset + k] = std::clamp(weights[p][k], config_.stdp.w_min, config_.stdp.w_max);
  }
}

void SpikingNetwork::build_layout() {
  std::size_t begin = 0;
  for (auto n : layers_) {
    layer_begin_.push_back(begin);
    begin += n;
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    projections_.push_back({layer_begin_[l], layers_[l], layer_begin_[l + 1], layers_[l + 1], offset});
    offset += layers_[l] * layers_[l + 1];
  }
  weights_.assign(offset, 0.0);
  eligibility_.assign(offset, 0.0);

  const std::size_t n = begin;
  v_.assign(n, config_.lif.v_rest);
  current_.assign(n, 0.0);
  refractory_until_.assign(n, 0.0);
  pre_trace_.assign(n, 0.0);
  post_trace_.assign(n, 0.0);
  spike_vec_.assign(n, 0.0);
  spike_count_.assign(n, 0);
  activity_.assign(n, 0);
  spiked_.assign(n, 0);
  const auto pulse_steps = std::max<long long>(1, std::llround(config_.pulse / config_.lif.dt));
  pulse_ring_.assign(static_cast<std::size_t>(pulse_steps), std::vector<int>(n, 0));
}

void SpikingNetwork::reset_window_state() {
  std::fill(v_.begin(), v_.end(), config_.lif.v_rest);
  std::fill(current_.begin(), current_.end(), 0.0);
  std::fill(refractory_until_.begin(), refractory_until_.end(), 0.0);
  std::fill(pre_trace_.begin(), pre_trace_.end(), 0.0);
  std::fill(post_trace_.begin(), post_trace_.end(), 0.0);
  std::fill(spike_count_.begin(), spike_count_.end(), 0);
  std::fill(activity_.begin(), activity_.end(), 0);
  for (auto& slot : pulse_ring_) std::fill(slot.begin(), slot.end(), 0);
  std::fill(eligibility_.begin(), eligibility_.end(), 0.0);
  recorded_.assign(recording_ ? v_.size() : 0, {});
}

WindowResult SpikingNetwork::run_window(const FeatureVector& features, Rng& rng) {
  const auto a = features.as_array();
  return run_window(std::span<const double>(a), rng);
}

WindowResult SpikingNetwork::run_window(std::span<const double> inputs, Rng& rng) {
  if (inputs.size() != layers_.front())
    throw std::invalid_argument("expected " + std::to_string(layers_.front()) + " inputs");
  for (double x : inputs)
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("network input outside [0,1]");

  reset_window_state();
  const auto& lif = config_.lif;
  const auto& stdp = config_.stdp;
  const std::size_t steps = config_.steps_per_window();
  const std::size_t n = v_.size();
  const std::size_t n_in = layers_.front();

  // Input spike trains as step indices.
  std::vector<std::vector<std::size_t>> input_steps(n_in);
  for (std::size_t i = 0; i < n_in; ++i) {
    std::vector<double> times;
    switch (config_.encoder) {
      case Encoder::rate_deterministic:
        times = encode_rate(inputs[i], config_.window, config_.f_max, RateMode::deterministic, rng);
        break;
      case Encoder::rate_poisson:
        times = encode_rate(inputs[i], config_.window, config_.f_max, RateMode::poisson, rng);
        break;
      case Encoder::temporal:
        times = {encode_temporal(inputs[i], config_.window)};
        break;
    }
    for (double t : times) {
      const auto k = static_cast<std::size_t>(std::floor(t / lif.dt + 1e-9));
      if (k < steps) input_steps[i].push_back(k);
    }
  }
  std::vector<std::size_t> input_cursor(n_in, 0);

  const double pre_decay = std::exp(-lif.dt / stdp.tau_plus);
  const double post_decay = std::exp(-lif.dt / stdp.tau_minus);
  const double elig_decay = std::exp(-lif.dt / stdp.trace_decay_tau);
  const auto kp = lif.kernel_params();
  const auto& kern = kernels::active();
  const std::size_t ring = pulse_ring_.size();

  WindowResult result;
  for (std::size_t k = 0; k < steps; ++k) {
    const double now = static_cast<double>(k) * lif.dt;

    kern.scale(elig_decay, eligibility_.data(), eligibility_.size());
    kern.scale(pre_decay, pre_trace_.data(), n);
    kern.scale(post_decay, post_trace_.data(), n);

    // Synaptic currents from pulses of spikes emitted during the last `ring` steps.
    std::fill(current_.begin(), current_.end(), 0.0);
    for (const auto& pr : projections_) {
      for (std::size_t i = 0; i < pr.pre_size; ++i) {
        const int a = activity_[pr.pre_begin + i];
        if (a == 0) continue;
        kern.axpy(config_.kappa_na * a, &weights_[pr.offset + i * pr.post_size], &current_[pr.post_begin],
                  pr.post_size);
      }
    }

    // Input generators.
    std::fill(spike_vec_.begin(), spike_vec_.end(), 0.0);
    for (std::size_t i = 0; i < n_in; ++i) {
      int c = 0;
      while (input_cursor[i] < input_steps[i].size() && input_steps[i][input_cursor[i]] == k) {
        ++c;
        ++input_cursor[i];
      }
      spike_vec_[i] = c;
    }

    kern.lif_update(kp, now, &v_[n_in], &current_[n_in], &refractory_until_[n_in], &spiked_[n_in], n - n_in);
    bool any_post = false;
    for (std::size_t j = n_in; j < n; ++j) {
      if (!spiked_[j]) continue;
      spike_vec_[j] = 1.0;
      refractory_until_[j] = now + lif.t_ref;
      any_post = true;
    }

    // Pair updates against traces of strictly earlier spikes; coincident pairs contribute nothing.
    for (const auto& pr : projections_) {
      for (std::size_t i = 0; i < pr.pre_size; ++i) {
        const double c = spike_vec_[pr.pre_begin + i];
        if (c == 0.0) continue;
        kern.axpy(-stdp.a_minus * c, &post_trace_[pr.post_begin], &eligibility_[pr.offset + i * pr.post_size],
                  pr.post_size);
      }
      if (!any_post) continue;
      bool post_fired = false;
      for (std::size_t j = 0; j < pr.post_size; ++j) post_fired = post_fired || spike_vec_[pr.post_begin + j] != 0.0;
      if (!post_fired) continue;
      for (std::size_t i = 0; i < pr.pre_size; ++i) {
        const double x = pre_trace_[pr.pre_begin + i];
        if (x == 0.0) continue;
        kern.axpy(stdp.a_plus * x, &spike_vec_[pr.post_begin], &eligibility_[pr.offset + i * pr.post_size],
                  pr.post_size);
      }
    }

    auto& slot = pulse_ring_[k % ring];
    for (std::size_t j = 0; j < n; ++j) {
      const double c = spike_vec_[j];
      const int ci = static_cast<int>(c);
      activity_[j] += ci - slot[j];
      slot[j] = ci;
      if (ci == 0) continue;
      pre_trace_[j] += c;
      post_trace_[j] += c;
      spike_count_[j] += ci;
      result.total_spikes += ci;
      if (recording_)
        for (int r = 0; r < ci; ++r) recorded_[j].push_back(now);
    }
  }

  const std::size_t out = layer_begin_.back();
  result.local_spikes = spike_count_[out + kLocalOutput];
  result.cloud_spikes = spike_count_[out + kCloudOutput];
  armed_ = true;
  return result;
}

void SpikingNetwork::apply_reward(double reward) {
  if (!armed_) throw StaleTrace("apply_reward without a preceding decision window");
  if (!(reward >= -1.0 && reward <= 1.0)) throw DomainError("reward outside [-1,1]");
  kernels::active().reward_update(config_.stdp.learning_rate * reward, config_.stdp.w_min, config_.stdp.w_max,
                                  weights_.data(), eligibility_.data(), weights_.size());
  armed_ = false;
}

void SpikingNetwork::arm_eligibility(std::span<const double> trace) {
  if (trace.size() != eligibility_.size()) throw std::invalid_argument("eligibility trace size mismatch");
  std::copy(trace.begin(), trace.end(), eligibility_.begin());
  armed_ = true;
}

Synapse SpikingNetwork::synapse(std::size_t k) const {
  for (const auto& pr : projections_) {
    if (k < pr.offset || k >= pr.offset + pr.pre_size * pr.post_size) continue;
    const std::size_t local = k - pr.offset;
    return {pr.pre_begin + local / pr.post_size, pr.post_begin + local % pr.post_size, weights_[k], eligibility_[k]};
  }
  throw std::out_of_range("synapse index");
}

NeuronState SpikingNetwork::neuron(std::size_t index) const {
  return {v_.at(index), refractory_until_.at(index), spike_count_.at(index)};
}

}  // namespace edgesnn::snn
