#include "edgesnn/metrics/energy.hpp"

#include <string>

#include "edgesnn/errors.hpp"

namespace edgesnn::metrics {

EnergyRow node_energy(const NodeActivity& a, const NodeSpec& node, double tx_energy_j_per_bit,
                      const EnergyParams& params, DecisionCost cost) {
  if (a.busy_time > a.duration * (1.0 + 1e-12) || a.busy_time < 0.0)
    throw InvariantViolation("node " + std::to_string(node.id) + ": busy time " + std::to_string(a.busy_time) +
                             " outside [0, " + std::to_string(a.duration) + "]");
  const double busy = a.busy_time < a.duration ? a.busy_time : a.duration;
  EnergyRow row;
  row.node = node.id;
  row.idle_j = node.p_idle_w * (a.duration - busy);
  row.active_j = node.p_active_w * busy;
  row.tx_j = tx_energy_j_per_bit * a.bits_sent;
  row.decision_j = cost == DecisionCost::per_spike ? params.e_spike_j * static_cast<double>(a.spike_total)
                                                   : params.e_fixed_j * static_cast<double>(a.n_decisions);
  return row;
}

EnergyRow EnergyLedger::edge_totals() const {
  EnergyRow t;
  t.node = -1;
  for (const auto& r : edge_rows) {
    t.idle_j += r.idle_j;
    t.active_j += r.active_j;
    t.tx_j += r.tx_j;
    t.decision_j += r.decision_j;
  }
  return t;
}

}  // namespace edgesnn::metrics
