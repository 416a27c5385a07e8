#include "flexmat/fleetgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace flexmat {

namespace {

constexpr int kJointResampleBudget = 1000;
constexpr int kTruncationDrawBudget = 100000;

// Uniform in [0, 1) with exactly 53 random bits. std::mt19937_64 output is
// specified bit-for-bit by the standard, so fleets are reproducible across
// standard libraries; the distributions are hand-rolled for the same reason.
double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& engine) {
  // Box-Muller; u1 is shifted into (0, 1] so the log stays finite. The
  // second variate of the pair is discarded to keep the draw stateless.
  const double u1 = 1.0 - uniform01(engine);
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643 * u2);
}

double sample_truncated(const TruncatedNormal& dist, std::mt19937_64& engine,
                        const char* what) {
  if (dist.std == 0.0) {
    return std::clamp(dist.mean, dist.min, dist.max);
  }
  for (int attempt = 0; attempt < kTruncationDrawBudget; ++attempt) {
    const double value = dist.mean + dist.std * standard_normal(engine);
    if (value >= dist.min && value <= dist.max) {
      return value;
    }
  }
  std::ostringstream msg;
  msg << what << " truncation bounds [" << dist.min << ", " << dist.max
      << "] rejected " << kTruncationDrawBudget << " consecutive draws from "
      << "N(" << dist.mean << ", " << dist.std << ")";
  throw ArchetypeInfeasibleError(msg.str());
}

void validate_truncated(const TruncatedNormal& dist, const char* what,
                        bool nonnegative) {
  std::ostringstream msg;
  if (!std::isfinite(dist.mean) || !std::isfinite(dist.std) ||
      !std::isfinite(dist.min) || !std::isfinite(dist.max)) {
    msg << what << " distribution has non-finite parameters";
    throw ConfigError(msg.str());
  }
  if (dist.std < 0.0) {
    msg << what << " std must be >= 0, got " << dist.std;
    throw ConfigError(msg.str());
  }
  if (!(dist.min < dist.max)) {
    msg << what << " truncation bounds must satisfy min < max, got ["
        << dist.min << ", " << dist.max << "]";
    throw ConfigError(msg.str());
  }
  if (nonnegative && dist.min < 0.0) {
    msg << what << " truncation minimum must be >= 0, got " << dist.min;
    throw ConfigError(msg.str());
  }
}

// Clock hour -> hours since the horizon start; hours earlier than the start
// are next-day times. Hours >= 24 express the next day explicitly.
double hour_offset(double clock_hour, double horizon_start_hour) {
  double offset = clock_hour - horizon_start_hour;
  if (offset < 0.0) {
    offset += 24.0;
  }
  return offset;
}

}  // namespace

void validate_archetype(const FleetArchetype& archetype) {
  if (archetype.name.empty()) {
    throw ConfigError("archetype name must be nonempty");
  }
  validate_truncated(archetype.arrival_hour, "arrival", false);
  validate_truncated(archetype.dwell_hours, "dwell", true);
  validate_truncated(archetype.energy_kwh, "energy", true);
  if (!(archetype.max_rate_kw > 0.0) ||
      !std::isfinite(archetype.max_rate_kw)) {
    throw ConfigError("max_rate_kw must be positive");
  }
  if (archetype.arrival_hour.min < 0.0) {
    throw ConfigError("arrival truncation minimum must be >= 0");
  }
}

std::vector<ChargeSession> sample_fleet(const FleetArchetype& archetype, int n,
                                        const Horizon& horizon,
                                        std::uint64_t seed,
                                        double horizon_start_hour) {
  validate_archetype(archetype);
  if (!horizon.valid()) {
    throw ConfigError("horizon must have num_slots >= 1 and a positive slot "
                      "duration");
  }
  if (n < 0) {
    throw ConfigError("fleet size must be >= 0");
  }

  const double delta = horizon.slot_duration_hours;
  const double horizon_hours = horizon.num_slots * delta;
  const double earliest_arrival =
      hour_offset(archetype.arrival_hour.min, horizon_start_hour);
  const double latest_arrival =
      hour_offset(archetype.arrival_hour.max, horizon_start_hour);
  if (earliest_arrival > latest_arrival) {
    throw ConfigError(
        "arrival bounds straddle the horizon start hour; write next-day "
        "hours above 24 to disambiguate");
  }
  if (latest_arrival + archetype.dwell_hours.max > horizon_hours) {
    std::ostringstream msg;
    msg << "horizon of " << horizon_hours << " h cannot contain a departure "
        << latest_arrival + archetype.dwell_hours.max
        << " h after its start";
    throw HorizonTooShortError(msg.str());
  }

  std::mt19937_64 engine(seed);
  std::vector<ChargeSession> fleet;
  fleet.reserve(n);
  for (int i = 0; i < n; ++i) {
    ChargeSession session;
    session.vehicle_id = archetype.name + "-" + std::to_string(i);
    session.max_rate_kw = archetype.max_rate_kw;

    bool accepted = false;
    for (int attempt = 0; attempt < kJointResampleBudget; ++attempt) {
      const double arrival_hour =
          sample_truncated(archetype.arrival_hour, engine, "arrival");
      const double dwell_hours =
          sample_truncated(archetype.dwell_hours, engine, "dwell");
      const double energy_kwh =
          sample_truncated(archetype.energy_kwh, engine, "energy");

      const double arrival_offset =
          hour_offset(arrival_hour, horizon_start_hour);
      // Arrival floors and departure ceils, so the continuous dwell is
      // contained in the slotted one (never shrinking feasibility).
      const int arrival_slot = static_cast<int>(arrival_offset / delta);
      const int departure_slot = std::max(
          arrival_slot,
          static_cast<int>(
              std::ceil((arrival_offset + dwell_hours) / delta)) -
              1);

      session.arrival_slot = arrival_slot;
      session.departure_slot = departure_slot;
      session.energy_kwh = energy_kwh;
      if (validate_session(session, horizon).ok()) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "archetype " << archetype.name << " produced no feasible "
          << "session in " << kJointResampleBudget << " joint draws";
      throw ArchetypeInfeasibleError(msg.str());
    }
    fleet.push_back(session);
  }
  return fleet;
}

std::vector<double> empirical_dwell_probability(
    const std::vector<ChargeSession>& sessions, const Horizon& horizon) {
  if (sessions.empty()) {
    throw EmptyFleetError();
  }
  std::vector<double> probability(horizon.num_slots, 0.0);
  for (const ChargeSession& session : sessions) {
    const SessionValidation check = validate_session(session, horizon);
    if (!check.ok()) {
      throw ConfigError(std::string(to_string(*check.fault)) + ": " +
                        check.detail);
    }
    for (int tau = session.arrival_slot; tau <= session.departure_slot;
         ++tau) {
      probability[tau] += 1.0;
    }
  }
  for (double& value : probability) {
    value /= static_cast<double>(sessions.size());
  }
  return probability;
}

SlackSummary slack_distribution(const std::vector<ChargeSession>& sessions,
                                const Horizon& horizon) {
  SlackSummary summary;
  summary.slack_hours.reserve(sessions.size());
  for (const ChargeSession& session : sessions) {
    const SessionValidation check = validate_session(session, horizon);
    if (!check.ok()) {
      throw ConfigError(std::string(to_string(*check.fault)) + ": " +
                        check.detail);
    }
    const double dwell_hours =
        horizon.slot_duration_hours * session.dwell_slots();
    summary.slack_hours.push_back(dwell_hours -
                                  session.energy_kwh / session.max_rate_kw);
  }
  if (summary.slack_hours.empty()) {
    summary.median_hours = std::numeric_limits<double>::quiet_NaN();
    return summary;
  }
  std::vector<double> sorted = summary.slack_hours;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  summary.median_hours = sorted.size() % 2 == 1
                             ? sorted[half]
                             : 0.5 * (sorted[half - 1] + sorted[half]);
  return summary;
}

}  // namespace flexmat
