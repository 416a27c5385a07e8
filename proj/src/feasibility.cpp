#include <cmath>
#include <sstream>

#include "charging_network.hpp"
#include "flexmat/core.hpp"

namespace flexmat {

FeasibilityReport validate_feasibility(const ConstraintSet& constraints,
                                       const Horizon& horizon,
                                       double quantum_kwh) {
  validate_constraint_set(constraints, horizon);
  if (!(quantum_kwh > 0.0) || !std::isfinite(quantum_kwh)) {
    throw ConfigError("quantum_kwh must be positive");
  }

  internal::ChargingNetwork network = internal::build_charging_network(
      constraints, horizon, nullptr, quantum_kwh);
  const MinCostFlow::Result result =
      network.graph.solve(network.source, network.sink);

  FeasibilityReport report;
  if (result.flow == network.total_demand_units) {
    std::ostringstream msg;
    msg << "all " << constraints.sessions.size()
        << " vehicles can be fully served";
    report.detail = msg.str();
    return report;
  }

  for (std::size_t i = 0; i < constraints.sessions.size(); ++i) {
    const internal::ChargingNetwork::Vehicle& vehicle = network.vehicles[i];
    if (network.graph.flow_on(vehicle.supply_arc) < vehicle.demand_units) {
      report.undeliverable.push_back(constraints.sessions[i].vehicle_id);
    }
  }
  const double shortfall_kwh =
      static_cast<double>(network.total_demand_units - result.flow) *
      quantum_kwh;
  std::ostringstream msg;
  msg << report.undeliverable.size() << " of " << constraints.sessions.size()
      << " vehicles cannot be fully served under the capacity limits; total "
      << "shortfall " << shortfall_kwh << " kWh";
  report.detail = msg.str();
  return report;
}

}  // namespace flexmat
