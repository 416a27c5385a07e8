#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flexmat/core.hpp"
#include "flexmat/solvers.hpp"

namespace flexmat {

// One randomly generated small instance plus the window to solve. Parameters
// are drawn on dyadic grids (rates in {2,3,4,6} kW, energies in quarter-slot
// multiples, integer capacities) so that grid-, quantization-, and
// continuous-feasibility coincide and the oracle bounds hold exactly.
struct RandomInstance {
  ConstraintSet constraints;
  Horizon horizon;
  Window window;
  std::uint64_t seed = 0;  // seed that reproduces this instance
};

// Deterministic in seed. with_capacity adds one capacity group over a random
// subset of vehicles and sometimes a global cap. At most 3 vehicles and 6
// slots, so the oracle always applies. The instance is NOT guaranteed
// feasible; see next_feasible_instance.
RandomInstance generate_small_instance(std::uint64_t seed, bool with_capacity);

// Resamples (deterministically) until the oracle finds the instance feasible.
RandomInstance next_feasible_instance(std::uint64_t seed, bool with_capacity,
                                      int grid_points);

struct VerifyOptions {
  int trials = 100;
  std::uint64_t rng_seed = 1;
  // 4 grid points per rate: the generator's energies and capacities are
  // quarter-multiples of r, so optimal LP vertices land exactly on this
  // grid for coupled instances and the oracle comparison is tight.
  int grid_points = 4;
  double quantum_kwh = kDefaultQuantumKwh;
  // Test hook: perturbs the flow solver's reported energy so that the
  // harness must flag a violation. Used as a negative control.
  double inject_discrepancy_kwh = 0.0;
};

struct VerifyReport {
  int trials = 0;
  int capacity_trials = 0;
  // Max |flow - oracle| minus its allowed bound, over all trials (negative
  // means within bounds everywhere).
  double worst_oracle_margin_kwh = 0.0;
  // Max |flow - separable| minus N*q over uncoupled trials.
  double worst_separable_margin_kwh = 0.0;
  // Largest absolute discrepancies actually observed.
  double max_flow_vs_oracle_kwh = 0.0;
  double max_flow_vs_separable_kwh = 0.0;
  std::optional<std::uint64_t> failing_seed;
  std::string failure_detail;

  bool ok() const { return !failing_seed.has_value(); }
};

// Cross-checks flow, separable (where applicable), and oracle results on
// randomized feasible instances, alternating coupled and uncoupled draws.
// Every discrepancy is compared against the solver agreement bounds; any
// violation records the reproducing seed.
VerifyReport run_verification(const VerifyOptions& options);

// Human-readable multi-line summary of a report.
std::string format_report(const VerifyReport& report);

}  // namespace flexmat
