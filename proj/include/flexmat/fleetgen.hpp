#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexmat/core.hpp"

namespace flexmat {

// Truncated normal parameters. Samples are drawn by rejection from
// N(mean, std) until they land in [min, max]; std == 0 degenerates to the
// mean (clamped into the bounds).
struct TruncatedNormal {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Parametric description of one vehicle vocation's charging behavior.
// Hours are clock hours; values below the horizon start hour are read as
// next-day times (an overnight arrival at 00:30 with a horizon starting at
// noon lands 12.5 h into the horizon). Values may exceed 24 to say the same
// thing explicitly.
struct FleetArchetype {
  std::string name;
  TruncatedNormal arrival_hour;
  TruncatedNormal dwell_hours;
  TruncatedNormal energy_kwh;
  double max_rate_kw = 0.0;
};

// Throws ConfigError when parameters are structurally invalid (std < 0,
// min >= max, rate <= 0, negative energy bounds).
void validate_archetype(const FleetArchetype& archetype);

// Draws n individually feasible sessions. Each session resamples (arrival,
// dwell, energy) jointly until the energy fits the rate-limited dwell, up to
// 1000 attempts; exhaustion throws ArchetypeInfeasibleError. Arrival hours
// floor to slots and departures ceil, so the continuous dwell is contained
// in the slotted one. Throws HorizonTooShortError when the truncation
// bounds cannot fit the horizon. Deterministic in (archetype, n, horizon,
// seed, horizon_start_hour).
std::vector<ChargeSession> sample_fleet(const FleetArchetype& archetype, int n,
                                        const Horizon& horizon,
                                        std::uint64_t seed,
                                        double horizon_start_hour = 12.0);

// Fraction of the fleet present per slot: entry tau is
// count(a <= tau <= d) / n. Throws EmptyFleetError for an empty list.
std::vector<double> empirical_dwell_probability(
    const std::vector<ChargeSession>& sessions, const Horizon& horizon);

struct SlackSummary {
  std::vector<double> slack_hours;  // per session, in session order
  double median_hours = 0.0;
};

// Slack per session: delta*(d - a + 1) - e/r, in hours. The summary also
// carries the median (NaN for an empty list).
SlackSummary slack_distribution(const std::vector<ChargeSession>& sessions,
                                const Horizon& horizon);

}  // namespace flexmat
