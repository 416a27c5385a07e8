#pragma once

#include <vector>

#include "flexmat/core.hpp"

namespace flexmat {

// Contiguous slot range [start_slot, start_slot + length_slots - 1].
struct Window {
  int start_slot = 0;
  int length_slots = 1;

  int end_slot() const { return start_slot + length_slots; }  // exclusive
  bool contains(int slot) const {
    return slot >= start_slot && slot < end_slot();
  }
  bool fits(const Horizon& horizon) const {
    return start_slot >= 0 && length_slots >= 1 &&
           end_slot() <= horizon.num_slots;
  }
};

// A charging schedule minimizing total in-window energy, with the witness
// schedule (per-vehicle populated) and the achieved in-window energy.
struct MinLoadSolution {
  Window window;
  LoadProfile schedule;
  double in_window_energy_kwh = 0.0;
};

// Default quantization for the flow solver: 1 Wh. Bounds the in-window
// energy error of a flow solve by num_sessions * quantum.
inline constexpr double kDefaultQuantumKwh = 0.001;

// Analytic solver for the uncoupled case. Per vehicle the minimum in-window
// energy is max(0, e - r*delta*n_out), with n_out the number of dwell slots
// outside the window. Out-of-window charge is placed earliest-first and
// in-window charge latest-first, which makes the schedule deterministic.
MinLoadSolution min_load_separable(const std::vector<ChargeSession>& sessions,
                                   const Horizon& horizon,
                                   const Window& window);

// Same, but refuses coupled constraint sets with CapacityGroupsPresentError.
MinLoadSolution min_load_separable(const ConstraintSet& constraints,
                                   const Horizon& horizon,
                                   const Window& window);

// Schedule-free fast path: just the summed analytic minimum, in kWh, in
// session order. min_load_separable reports exactly this value.
double separable_in_window_energy(const std::vector<ChargeSession>& sessions,
                                  const Horizon& horizon,
                                  const Window& window);

// Min-cost-flow solver for coupled constraints. Demands and per-slot
// capacities round to the nearest quantum_kwh, so in general the result is
// within (quantum/2) * sum_i (1 + dwell_slots_i) of the continuous optimum;
// when energies and slot capacities are exact multiples of the quantum the
// quantization is lossless and agreement tightens to num_sessions * quantum.
// Schedule rates are multiples of quantum/delta and may exceed limits by at
// most quantum/(2*delta). Throws JointlyInfeasibleError when the
// requirements cannot be met.
MinLoadSolution min_load_flow(const ConstraintSet& constraints,
                              const Horizon& horizon, const Window& window,
                              double quantum_kwh = kDefaultQuantumKwh);

// Verification oracle: dense dynamic program over per-vehicle rate grids
// {0, r/G, 2r/G, ..., r} with feasibility filtering, independent of the flow
// formulation. Accepts at most kOracleMaxVehicles vehicles and
// kOracleMaxSlots slots; larger instances throw InstanceTooLargeError.
// The result is within oracle_gap_kwh() of the continuous optimum. Rarely,
// an instance feasible in continuous rates has no feasible point on the
// grid; that surfaces as JointlyInfeasibleError.
MinLoadSolution min_load_oracle(const ConstraintSet& constraints,
                                const Horizon& horizon, const Window& window,
                                int grid_points);

inline constexpr int kOracleMaxVehicles = 4;
inline constexpr int kOracleMaxSlots = 8;

// Worst-case oracle optimality gap: (r_max / grid_points) * k * N * delta.
double oracle_gap_kwh(const ConstraintSet& constraints, const Horizon& horizon,
                      const Window& window, int grid_points);

// Dispatch: separable when uncoupled, flow otherwise.
MinLoadSolution min_load(const ConstraintSet& constraints,
                         const Horizon& horizon, const Window& window,
                         double quantum_kwh = kDefaultQuantumKwh);

}  // namespace flexmat
