#include <cmath>
#include <sstream>

#include "charging_network.hpp"
#include "flexmat/solvers.hpp"

namespace flexmat {

MinLoadSolution min_load_flow(const ConstraintSet& constraints,
                              const Horizon& horizon, const Window& window,
                              double quantum_kwh) {
  validate_constraint_set(constraints, horizon);
  if (!window.fits(horizon)) {
    std::ostringstream msg;
    msg << "window [start " << window.start_slot << ", length "
        << window.length_slots << "] does not fit a horizon of "
        << horizon.num_slots << " slots";
    throw ConfigError(msg.str());
  }
  if (!(quantum_kwh > 0.0) || !std::isfinite(quantum_kwh)) {
    throw ConfigError("quantum_kwh must be positive");
  }

  internal::ChargingNetwork network = internal::build_charging_network(
      constraints, horizon, &window, quantum_kwh);
  const MinCostFlow::Result result =
      network.graph.solve(network.source, network.sink);

  if (result.flow < network.total_demand_units) {
    std::vector<std::string> undeliverable;
    for (std::size_t i = 0; i < constraints.sessions.size(); ++i) {
      const internal::ChargingNetwork::Vehicle& vehicle = network.vehicles[i];
      if (network.graph.flow_on(vehicle.supply_arc) < vehicle.demand_units) {
        undeliverable.push_back(constraints.sessions[i].vehicle_id);
      }
    }
    std::ostringstream msg;
    msg << "no joint schedule delivers every requirement; "
        << undeliverable.size() << " of " << constraints.sessions.size()
        << " vehicles fall short";
    throw JointlyInfeasibleError(msg.str(), std::move(undeliverable));
  }

  MinLoadSolution solution;
  solution.window = window;
  solution.schedule.horizon = horizon;
  solution.schedule.aggregate.assign(horizon.num_slots, 0.0);
  const double delta = horizon.slot_duration_hours;

  for (std::size_t i = 0; i < constraints.sessions.size(); ++i) {
    const ChargeSession& session = constraints.sessions[i];
    std::vector<double> load(horizon.num_slots, 0.0);
    for (const auto& [slot, arc] : network.vehicles[i].slot_arcs) {
      const std::int64_t units = network.graph.flow_on(arc);
      if (units == 0) {
        continue;
      }
      const double rate_kw = static_cast<double>(units) * quantum_kwh / delta;
      load[slot] = rate_kw;
      solution.schedule.aggregate[slot] += rate_kw;
    }
    solution.schedule.per_vehicle.emplace(session.vehicle_id, std::move(load));
  }

  // The flow cost counts exactly the in-window quanta.
  solution.in_window_energy_kwh =
      static_cast<double>(result.cost) * quantum_kwh;
  return solution;
}

MinLoadSolution min_load(const ConstraintSet& constraints,
                         const Horizon& horizon, const Window& window,
                         double quantum_kwh) {
  if (constraints.has_coupling()) {
    return min_load_flow(constraints, horizon, window, quantum_kwh);
  }
  return min_load_separable(constraints.sessions, horizon, window);
}

}  // namespace flexmat
