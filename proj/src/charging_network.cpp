#include "charging_network.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <unordered_map>

namespace flexmat::internal {

namespace {
// Caps any single quantized quantity so that sums over ~1e5 arcs stay far
// below the int64 range the flow solver relies on.
constexpr double kMaxUnits = 1e12;
}  // namespace

std::int64_t quantize_units(double kwh, double quantum_kwh) {
  const double scaled = kwh / quantum_kwh;
  if (!std::isfinite(scaled) || std::abs(scaled) > kMaxUnits) {
    std::ostringstream msg;
    msg << kwh << " kWh at a quantum of " << quantum_kwh
        << " kWh exceeds the integer range of the flow solver";
    throw QuantizationOverflowError(msg.str());
  }
  return std::llround(scaled);
}

ChargingNetwork build_charging_network(const ConstraintSet& constraints,
                                       const Horizon& horizon,
                                       const Window* window,
                                       double quantum_kwh) {
  const int num_vehicles = static_cast<int>(constraints.sessions.size());
  const int num_groups = static_cast<int>(constraints.capacity_groups.size());
  const int num_slots = horizon.num_slots;
  const double delta = horizon.slot_duration_hours;
  const bool has_global = constraints.global_capacity_kw.has_value();

  // Nodes: source, sink, one per vehicle, one per (group, slot), and one per
  // slot for the global cap.
  const int vehicle_base = 2;
  const int group_base = vehicle_base + num_vehicles;
  const int global_base = group_base + num_groups * num_slots;
  const int num_nodes = global_base + (has_global ? num_slots : 0);

  ChargingNetwork network(num_nodes);
  network.vehicles.resize(num_vehicles);

  std::unordered_map<std::string, int> group_of;
  for (int g = 0; g < num_groups; ++g) {
    for (const std::string& id :
         constraints.capacity_groups[g].member_vehicle_ids) {
      group_of.emplace(id, g);
    }
  }

  const auto global_node = [&](int slot) { return global_base + slot; };
  const auto group_node = [&](int g, int slot) {
    return group_base + g * num_slots + slot;
  };

  if (has_global) {
    const std::int64_t cap = quantize_units(
        *constraints.global_capacity_kw * delta, quantum_kwh);
    for (int slot = 0; slot < num_slots; ++slot) {
      network.graph.add_arc(global_node(slot), network.sink, cap, 0);
    }
  }
  for (int g = 0; g < num_groups; ++g) {
    const std::int64_t cap = quantize_units(
        constraints.capacity_groups[g].capacity_kw * delta, quantum_kwh);
    for (int slot = 0; slot < num_slots; ++slot) {
      const int next = has_global ? global_node(slot) : network.sink;
      network.graph.add_arc(group_node(g, slot), next, cap, 0);
    }
  }

  for (int i = 0; i < num_vehicles; ++i) {
    const ChargeSession& session = constraints.sessions[i];
    ChargingNetwork::Vehicle& vehicle = network.vehicles[i];

    vehicle.demand_units = quantize_units(session.energy_kwh, quantum_kwh);
    vehicle.supply_arc = network.graph.add_arc(
        network.source, vehicle_base + i, vehicle.demand_units, 0);
    network.total_demand_units += vehicle.demand_units;

    const std::int64_t rate_cap =
        quantize_units(session.max_rate_kw * delta, quantum_kwh);
    const auto group = group_of.find(session.vehicle_id);
    for (int slot = session.arrival_slot; slot <= session.departure_slot;
         ++slot) {
      const int next = group != group_of.end() ? group_node(group->second, slot)
                       : has_global            ? global_node(slot)
                                               : network.sink;
      const std::int64_t cost =
          window != nullptr && window->contains(slot) ? 1 : 0;
      const int arc =
          network.graph.add_arc(vehicle_base + i, next, rate_cap, cost);
      vehicle.slot_arcs.emplace_back(slot, arc);
    }
  }
  return network;
}

}  // namespace flexmat::internal
