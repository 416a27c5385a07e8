#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "flexmat/core.hpp"
#include "flexmat/mincostflow.hpp"
#include "flexmat/solvers.hpp"

namespace flexmat::internal {

// Quantized transportation network shared by feasibility checks and the
// windowed min-load solver:
//
//   source -> vehicle          capacity e_i/q,   cost 0
//   vehicle -> coupling node   capacity r_i*d/q, cost 1 inside the window
//   group node -> next stage   capacity C_g*d/q, cost 0
//   global node -> sink        capacity C*d/q,   cost 0
//
// per dwell slot, with d the slot duration. Ungrouped vehicles skip the
// group stage; without a global cap the last present stage feeds the sink.
struct ChargingNetwork {
  explicit ChargingNetwork(int num_nodes) : graph(num_nodes) {}

  MinCostFlow graph;
  int source = 0;
  int sink = 1;
  std::int64_t total_demand_units = 0;

  struct Vehicle {
    std::int64_t demand_units = 0;
    int supply_arc = -1;
    std::vector<std::pair<int, int>> slot_arcs;  // (slot, arc id)
  };
  std::vector<Vehicle> vehicles;  // parallel to constraints.sessions
};

// Converts kWh to integer quanta with round-half-away rounding. Throws
// QuantizationOverflowError when the scaled value leaves the range that
// keeps every node's total flow safely inside 64 bits.
std::int64_t quantize_units(double kwh, double quantum_kwh);

// window == nullptr builds the all-zero-cost variant used for feasibility.
// Assumes constraints were validated; does not re-validate.
ChargingNetwork build_charging_network(const ConstraintSet& constraints,
                                       const Horizon& horizon,
                                       const Window* window,
                                       double quantum_kwh);

}  // namespace flexmat::internal
