#pragma once
// Linear energy model: idle/active power, per-bit uplink transmission, and a
// decision cost that is per spike for the spiking policy and per decision for
// the baselines.

#include <cstdint>
#include <vector>

#include "edgesnn/core/model.hpp"

namespace edgesnn::metrics {

struct EnergyParams {
  double e_spike_j = 1e-6;
  double e_fixed_j = 1e-3;
};

enum class DecisionCost { per_spike, per_decision };

struct NodeActivity {
  double busy_time = 0.0;
  double duration = 0.0;
  double bits_sent = 0.0;
  std::int64_t spike_total = 0;
  std::int64_t n_decisions = 0;
};

struct EnergyRow {
  NodeId node = 0;
  double idle_j = 0.0;
  double active_j = 0.0;
  double tx_j = 0.0;
  double decision_j = 0.0;

  double total_j() const noexcept { return idle_j + active_j + tx_j + decision_j; }
};

// Throws InvariantViolation when busy_time exceeds duration.
EnergyRow node_energy(const NodeActivity& activity, const NodeSpec& node, double tx_energy_j_per_bit,
                      const EnergyParams& params, DecisionCost cost);

struct EnergyLedger {
  std::vector<EnergyRow> edge_rows;
  EnergyRow cloud;  // reported separately; not part of the edge totals

  EnergyRow edge_totals() const;
  double edge_total_j() const { return edge_totals().total_j(); }
};

}  // namespace edgesnn::metrics
