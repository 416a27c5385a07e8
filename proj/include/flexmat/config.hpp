#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flexmat/core.hpp"
#include "flexmat/fleetgen.hpp"
#include "flexmat/matrix.hpp"

namespace flexmat {

// Archetype JSON:
//   {
//     "name": "freight",
//     "arrival": {"mean_hour": 18.0, "std_hours": 1.5, "min": 13.0, "max": 23.0},
//     "dwell": {"mean_hours": 13.0, "std_hours": 2.0, "min": 6.0, "max": 18.0},
//     "energy_kwh": {"mean": 45.0, "std": 15.0, "min": 10.0, "max": 90.0},
//     "max_rate_kw": 50.0
//   }
// Hours are clock hours; values below the horizon start hour mean next-day
// times and may be written above 24 for clarity.
FleetArchetype parse_archetype_json(const std::string& text);
FleetArchetype load_archetype_json(const std::string& path);

// One matrix run, assembled from an optional JSON config file plus CLI
// flags. Exactly one input mode (sessions file or archetype sampling) must
// end up set.
struct RunConfig {
  Horizon horizon{48, 1.0};
  double horizon_start_hour = 12.0;  // slot 0 starts at this clock hour
  int max_delay = 8;
  Normalization normalization = Normalization::kAggregate;

  std::vector<CapacityGroup> capacity_groups;
  std::optional<double> global_capacity_kw;

  std::optional<std::string> sessions_csv;
  std::optional<std::string> archetype_path;
  int fleet_size = 100;
  int num_samples = 1000;
  std::uint64_t rng_seed = 1;

  std::optional<std::string> out_csv;
  std::optional<std::string> out_svg;
  int threads = 0;  // 0 = hardware concurrency
};

// Parses the run-config JSON schema documented in the README. Unknown keys
// are rejected so typos fail loudly.
RunConfig parse_run_config_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Cross-field validation: exactly one input mode, max_delay within the
// horizon, sane horizon and counts. Throws ConfigError.
void validate_run_config(const RunConfig& config);

Normalization parse_normalization(const std::string& text);

}  // namespace flexmat
