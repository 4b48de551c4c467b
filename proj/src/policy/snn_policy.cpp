#include "edgesnn/policy/snn_policy.hpp"

#include <algorithm>

namespace edgesnn::policy {

double reward_for(const Task& task, Outcome outcome, double latency) {
  switch (outcome) {
    case Outcome::success: {
      const double margin = task.deadline - task.arrival_time;
      return std::clamp(1.0 - latency / margin, 0.0, 1.0);
    }
    case Outcome::deadline_miss:
    case Outcome::queue_drop:
      return -1.0;
    case Outcome::unfinished:
      return 0.0;
  }
  return 0.0;
}

SnnPolicy::SnnPolicy(snn::NetworkConfig config, std::uint64_t seed)
    : net_([&] {
        auto init = make_rng(seed, rng_stream::snn_init);
        return snn::SpikingNetwork(std::move(config), FeatureVector::size, init);
      }()) {}

Decision SnnPolicy::decide(const PolicyContext& ctx, const Task& task, Rng& rng) {
  const auto r = net_.run_window(ctx.features, rng);
  const auto venue = snn::decide(r.local_spikes, r.cloud_spikes);
  const auto trace = net_.eligibility();
  auto& slot = pending_[task.id];
  slot.features = ctx.features;
  slot.venue = venue;
  auto& saved = slot.trace;
  saved.assign(trace.begin(), trace.end());
  // Last projection is [pre][2].
  const std::size_t pre = net_.layer_sizes()[net_.layer_sizes().size() - 2];
  const std::size_t offset = saved.size() - 2 * pre;
  const auto& cfg = net_.config();
  if (!cfg.learn_hidden) std::fill(saved.begin(), saved.begin() + static_cast<std::ptrdiff_t>(offset), 0.0);
  const std::size_t winner =
      venue == OffloadDecision::cloud ? snn::SpikingNetwork::kCloudOutput : snn::SpikingNetwork::kLocalOutput;
  const std::size_t loser = 1 - winner;
  for (std::size_t i = 0; i < pre; ++i) {
    double& l = saved[offset + 2 * i + loser];
    switch (cfg.output_credit) {
      case snn::OutputCredit::all: break;
      case snn::OutputCredit::winner: l = 0.0; break;
      case snn::OutputCredit::contrast: l = -saved[offset + 2 * i + winner]; break;
    }
  }
  return {venue, cfg.window, r.total_spikes};
}

double SnnPolicy::LinearFit::predict(const FeatureVector& x) const noexcept {
  const auto a = x.as_array();
  double v = c[0];
  for (std::size_t i = 0; i < a.size(); ++i) v += c[i + 1] * a[i];
  return v;
}

void SnnPolicy::LinearFit::update(const FeatureVector& x, double reward, double rate) noexcept {
  const double err = reward - predict(x);
  const auto a = x.as_array();
  c[0] += rate * err;
  for (std::size_t i = 0; i < a.size(); ++i) c[i + 1] += rate * err * a[i];
}

double SnnPolicy::expected_reward(const FeatureVector& features) const noexcept {
  switch (net_.config().reward_baseline) {
    case snn::RewardBaseline::none: return 0.0;
    case snn::RewardBaseline::mean: return mean_;
    case snn::RewardBaseline::linear: return fit_.predict(features);
    case snn::RewardBaseline::venue: return 0.5 * (venue_fit_[0].predict(features) + venue_fit_[1].predict(features));
  }
  return 0.0;
}

void SnnPolicy::feedback(const Task& task, Outcome outcome, double latency) {
  auto it = pending_.find(task.id);
  if (it == pending_.end()) return;
  const auto& p = it->second;
  const double reward = reward_for(task, outcome, latency);
  const auto& cfg = net_.config();
  const double rate = cfg.reward_baseline_alpha;
  if (cfg.reward_baseline == snn::RewardBaseline::mean && !mean_seen_) {
    mean_ = reward;
    mean_seen_ = true;
  }
  const double delta = reward - expected_reward(p.features);
  switch (cfg.reward_baseline) {
    case snn::RewardBaseline::none: break;
    case snn::RewardBaseline::mean: mean_ += rate * (reward - mean_); break;
    case snn::RewardBaseline::linear: fit_.update(p.features, reward, rate); break;
    case snn::RewardBaseline::venue:
      venue_fit_[p.venue == OffloadDecision::cloud ? 1 : 0].update(p.features, reward, rate);
      break;
  }
  net_.arm_eligibility(p.trace);
  net_.apply_reward(std::clamp(delta, -1.0, 1.0));
  pending_.erase(it);
}

}  // namespace edgesnn::policy
