#pragma once

#include <cstdint>
#include <vector>

#include "flexmat/core.hpp"
#include "flexmat/fleetgen.hpp"
#include "flexmat/solvers.hpp"

namespace flexmat {

enum class Normalization {
  kAggregate,   // raw fleet-level kW
  kPerVehicle,  // divided by fleet size
};

const char* to_string(Normalization normalization);

// D x T array of reduction potentials in kW. Row k-1 holds window length k,
// column t the window start slot. Cells whose window would overrun the
// horizon are masked invalid and carry NaN; they never enter aggregation.
struct ReductionPotentialMatrix {
  Horizon horizon;
  int max_delay_slots = 0;              // D
  std::vector<double> values;           // row-major D x T, NaN where masked
  std::vector<std::uint8_t> valid_mask; // row-major D x T
  Normalization normalization = Normalization::kAggregate;
  int num_vehicles = 0;
  // Set when any cell is negative, which can only happen when capacity
  // constraints bind harder than the uncoordinated baseline assumes.
  bool has_negative_cells = false;

  int rows() const { return max_delay_slots; }
  int cols() const { return horizon.num_slots; }

  // k is the window length in [1, D]; t the start slot in [0, T-1].
  double at(int k, int t) const { return values[index(k, t)]; }
  bool valid(int k, int t) const { return valid_mask[index(k, t)] != 0; }
  std::size_t index(int k, int t) const {
    return static_cast<std::size_t>(k - 1) * cols() + t;
  }

  // Maximum over valid cells; 0 when every valid cell is <= 0 or none exist.
  double max_valid_value() const;
  bool any_valid() const;
};

// Monte Carlo averaging plan: S independent fleets of N vehicles.
struct MonteCarloSpec {
  int fleet_size = 100;
  int num_samples = 1000;
  std::uint64_t rng_seed = 1;
};

// Reduction potential of one window, in kW: the per-slot average of
// (uncoordinated - minimum) load over the window. The uncoordinated
// baseline deliberately ignores capacity constraints (it models unmanaged
// charging), so cells can be negative when capacity limits bind.
double reduction_potential(const ConstraintSet& constraints,
                           const Horizon& horizon, const Window& window,
                           double quantum_kwh = kDefaultQuantumKwh);

// Fills every valid (k, t) cell by an independent solve; no state is carried
// between windows. threads > 1 fans cells out to a pool; output is
// identical to the sequential result regardless of thread count.
ReductionPotentialMatrix build_matrix(const ConstraintSet& constraints,
                                      const Horizon& horizon, int max_delay,
                                      double quantum_kwh = kDefaultQuantumKwh,
                                      int threads = 1);

// Seed for Monte Carlo sample j, derived from MonteCarloSpec::rng_seed via a
// splitmix64 stream. Exposed so samples can be reproduced one at a time.
std::uint64_t monte_carlo_sample_seed(std::uint64_t rng_seed, int sample_index);

// Draws spec.num_samples fleets of spec.fleet_size sessions, builds each
// matrix, and averages the valid cells elementwise in fixed sample order.
// kPerVehicle divides the average by the fleet size. Bit-reproducible for a
// fixed seed, for any thread count.
ReductionPotentialMatrix monte_carlo_matrix(const FleetArchetype& archetype,
                                            const MonteCarloSpec& spec,
                                            const Horizon& horizon,
                                            int max_delay,
                                            Normalization normalization,
                                            double horizon_start_hour = 12.0,
                                            int threads = 1);

}  // namespace flexmat
