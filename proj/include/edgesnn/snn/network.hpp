#pragma once
// Layered feed-forward LIF network with reward-modulated STDP.
//
// A decision window drives the input layer with encoded feature spike trains
// and integrates every other layer for `window` seconds at step `dt`. Each
// spike injects a rectangular current pulse of kappa * w for `pulse` seconds
// into its post-synaptic neurons, starting on the next step. Synapses collect
// STDP pair updates into eligibility traces; weights only change when a reward
// is applied afterwards.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "edgesnn/core/model.hpp"
#include "edgesnn/core/rng.hpp"
#include "edgesnn/snn/encoding.hpp"
#include "edgesnn/snn/lif.hpp"
#include "edgesnn/snn/stdp.hpp"

namespace edgesnn::snn {

// Eligibility handed to apply_reward for the output projection. all: both
// outputs keep their own traces. winner: the losing output's trace is zeroed.
// contrast: the losing output gets the negated trace of the winner, so rewards
// move the two outputs apart and leave their summed drive unchanged.
enum class OutputCredit { all, winner, contrast };
std::string_view to_string(OutputCredit c) noexcept;
OutputCredit output_credit_from_string(std::string_view name);

// Reward expectation subtracted before apply_reward. mean: running average of
// past rewards. linear: least-mean-squares fit of reward on the features.
// venue: one such fit per venue, fed only by that venue's outcomes; the
// baseline is the average of the two fits, so the difference approximates
// the advantage of the chosen venue.
enum class RewardBaseline { none, mean, linear, venue };
std::string_view to_string(RewardBaseline b) noexcept;
RewardBaseline reward_baseline_from_string(std::string_view name);

struct FeatureVector {
  double net_latency = 0.0;
  double energy_level = 0.0;
  double priority = 0.0;
  double queue_util = 0.0;
  double size_norm = 0.0;

  static constexpr std::size_t size = 5;
  static constexpr std::array<std::string_view, size> names{"net_latency", "energy_level", "priority", "queue_util",
                                                            "size_norm"};

  std::array<double, size> as_array() const { return {net_latency, energy_level, priority, queue_util, size_norm}; }
  static FeatureVector from_array(std::span<const double, size> a) { return {a[0], a[1], a[2], a[3], a[4]}; }
  bool in_range() const;
};

struct NetworkConfig {
  LifParams lif;
  StdpParams stdp;
  std::vector<std::size_t> hidden_layers{16};
  double window = 50e-3;
  double f_max = 200.0;
  Encoder encoder = Encoder::rate_deterministic;
  double kappa_na = 2.0;  // current per unit weight
  double pulse = 1e-3;
  double init_low = 0.4;  // initial weights ~ U[init_low, init_high] * w_max
  double init_high = 0.6;
  // Read by the decision policy, not the network.
  OutputCredit output_credit = OutputCredit::all;
  bool learn_hidden = true;  // false: only the output projection is plastic
  RewardBaseline reward_baseline = RewardBaseline::none;
  double reward_baseline_alpha = 0.01;  // step size of the baseline estimate

  void validate() const;
  std::size_t steps_per_window() const;
};

struct Synapse {
  std::size_t pre = 0;
  std::size_t post = 0;
  double w = 0.0;
  double eligibility = 0.0;
};

struct WindowResult {
  int local_spikes = 0;
  int cloud_spikes = 0;
  std::int64_t total_spikes = 0;
};

class SpikingNetwork {
 public:
  static constexpr std::size_t kLocalOutput = 0;
  static constexpr std::size_t kCloudOutput = 1;

  // Dense feed-forward net n_inputs -> hidden_layers... -> 2, weights drawn from init_rng.
  SpikingNetwork(NetworkConfig config, std::size_t n_inputs, Rng& init_rng);
  // Explicit layer sizes (last must be 2) and one weight matrix per projection,
  // each laid out [pre][post].
  SpikingNetwork(NetworkConfig config, std::vector<std::size_t> layer_sizes,
                 std::vector<std::vector<double>> weights);

  WindowResult run_window(std::span<const double> inputs, Rng& rng);
  WindowResult run_window(const FeatureVector& features, Rng& rng);

  // w <- clamp(w + learning_rate * reward * eligibility); traces reset.
  // Throws StaleTrace unless a window (or arm_eligibility) preceded it.
  void apply_reward(double reward);

  bool trace_armed() const noexcept { return armed_; }
  std::span<const double> eligibility() const noexcept { return eligibility_; }
  // Restores a trace saved after an earlier window and arms it for apply_reward.
  void arm_eligibility(std::span<const double> trace);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t synapse_count() const noexcept { return weights_.size(); }
  Synapse synapse(std::size_t k) const;

  const NetworkConfig& config() const noexcept { return config_; }
  const std::vector<std::size_t>& layer_sizes() const noexcept { return layers_; }
  std::size_t neuron_count() const noexcept { return v_.size(); }
  // Membrane state at the end of the last window (input neurons are generators).
  NeuronState neuron(std::size_t index) const;
  // Spike times (seconds from window start) per neuron in the last window,
  // kept only when recording is enabled.
  void set_recording(bool on) { recording_ = on; }
  const std::vector<std::vector<double>>& recorded_spikes() const noexcept { return recorded_; }

 private:
  struct Projection {
    std::size_t pre_begin, pre_size, post_begin, post_size, offset;
  };

  void build_layout();
  void reset_window_state();

  NetworkConfig config_;
  std::vector<std::size_t> layers_;
  std::vector<std::size_t> layer_begin_;
  std::vector<Projection> projections_;

  std::vector<double> weights_;      // all projections, each [pre][post]
  std::vector<double> eligibility_;  // same layout as weights_
  bool armed_ = false;

  // Per-window scratch, sized to neuron_count().
  std::vector<double> v_, current_, refractory_until_, pre_trace_, post_trace_, spike_vec_;
  std::vector<int> spike_count_, activity_;
  std::vector<std::uint8_t> spiked_;
  std::vector<std::vector<int>> pulse_ring_;
  bool recording_ = false;
  std::vector<std::vector<double>> recorded_;
};

}  // namespace edgesnn::snn

namespace edgesnn::snn {

// Cloud iff the cloud output fired strictly more; ties stay local.
inline OffloadDecision decide(int local_spikes, int cloud_spikes) noexcept {
  return cloud_spikes > local_spikes ? OffloadDecision::cloud : OffloadDecision::local;
}

}  // namespace edgesnn::snn
