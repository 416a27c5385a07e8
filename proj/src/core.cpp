#include "flexmat/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace flexmat {

const char* to_string(SessionFault fault) {
  switch (fault) {
    case SessionFault::BadOrdering:
      return "BadOrdering";
    case SessionFault::OutOfHorizon:
      return "OutOfHorizon";
    case SessionFault::InfeasibleEnergy:
      return "InfeasibleEnergy";
    case SessionFault::BadValue:
      return "BadValue";
  }
  return "?";
}

SessionValidation validate_session(const ChargeSession& session,
                                   const Horizon& horizon) {
  std::ostringstream msg;
  if (!horizon.valid()) {
    return {SessionFault::BadValue, "invalid horizon"};
  }
  if (!std::isfinite(session.energy_kwh) ||
      !std::isfinite(session.max_rate_kw) || session.energy_kwh < 0.0 ||
      session.max_rate_kw <= 0.0) {
    msg << "vehicle " << session.vehicle_id << ": energy_kwh must be >= 0 and "
        << "max_rate_kw > 0";
    return {SessionFault::BadValue, msg.str()};
  }
  if (session.arrival_slot > session.departure_slot) {
    msg << "vehicle " << session.vehicle_id << ": arrival slot "
        << session.arrival_slot << " is after departure slot "
        << session.departure_slot;
    return {SessionFault::BadOrdering, msg.str()};
  }
  if (session.arrival_slot < 0 || session.departure_slot >= horizon.num_slots) {
    msg << "vehicle " << session.vehicle_id << ": dwell ["
        << session.arrival_slot << ", " << session.departure_slot
        << "] leaves the horizon [0, " << horizon.num_slots - 1 << "]";
    return {SessionFault::OutOfHorizon, msg.str()};
  }
  const double deliverable = session.max_rate_kw *
                             horizon.slot_duration_hours *
                             session.dwell_slots();
  if (session.energy_kwh > deliverable) {
    msg << "vehicle " << session.vehicle_id << ": needs " << session.energy_kwh
        << " kWh but at most " << deliverable
        << " kWh fit in the rate-limited dwell";
    return {SessionFault::InfeasibleEnergy, msg.str()};
  }
  return {};
}

void validate_constraint_set(const ConstraintSet& constraints,
                             const Horizon& horizon) {
  if (!horizon.valid()) {
    throw ConfigError("horizon must have num_slots >= 1 and a positive slot "
                      "duration");
  }
  std::set<std::string> ids;
  for (const ChargeSession& session : constraints.sessions) {
    const SessionValidation check = validate_session(session, horizon);
    if (!check.ok()) {
      throw ConfigError(std::string(to_string(*check.fault)) + ": " +
                        check.detail);
    }
    if (!ids.insert(session.vehicle_id).second) {
      throw ConfigError("duplicate vehicle id: " + session.vehicle_id);
    }
  }
  std::set<std::string> grouped;
  for (const CapacityGroup& group : constraints.capacity_groups) {
    if (!(group.capacity_kw > 0.0) || !std::isfinite(group.capacity_kw)) {
      throw ConfigError("capacity group limit must be positive");
    }
    if (group.member_vehicle_ids.empty()) {
      throw ConfigError("capacity group has no members");
    }
    for (const std::string& id : group.member_vehicle_ids) {
      if (ids.find(id) == ids.end()) {
        throw ConfigError("capacity group member " + id +
                          " has no charge session");
      }
      if (!grouped.insert(id).second) {
        throw ConfigError("vehicle " + id +
                          " appears in more than one capacity group");
      }
    }
  }
  if (constraints.global_capacity_kw &&
      (!(*constraints.global_capacity_kw > 0.0) ||
       !std::isfinite(*constraints.global_capacity_kw))) {
    throw ConfigError("global capacity must be positive");
  }
}

LoadProfile uncoordinated_profile(const std::vector<ChargeSession>& sessions,
                                  const Horizon& horizon) {
  const int num_slots = horizon.num_slots;
  const double delta = horizon.slot_duration_hours;

  LoadProfile profile;
  profile.horizon = horizon;
  profile.aggregate.assign(num_slots, 0.0);

  for (const ChargeSession& session : sessions) {
    const SessionValidation check = validate_session(session, horizon);
    if (!check.ok()) {
      throw ConfigError(std::string(to_string(*check.fault)) + ": " +
                        check.detail);
    }
    std::vector<double> load(num_slots, 0.0);
    const double slot_energy = session.max_rate_kw * delta;
    // Full-rate slots first; the final slot takes whatever energy remains so
    // the delivered total is exactly energy_kwh.
    const double ratio = session.energy_kwh / slot_energy;
    const int full_slots = ratio >= session.dwell_slots()
                               ? session.dwell_slots()
                               : static_cast<int>(ratio);
    const double remainder = session.energy_kwh - full_slots * slot_energy;
    for (int i = 0; i < full_slots; ++i) {
      load[session.arrival_slot + i] = session.max_rate_kw;
    }
    if (remainder > 0.0 && session.arrival_slot + full_slots <= session.departure_slot) {
      load[session.arrival_slot + full_slots] =
          std::min(remainder / delta, session.max_rate_kw);
    }
    for (int tau = 0; tau < num_slots; ++tau) {
      profile.aggregate[tau] += load[tau];
    }
    profile.per_vehicle.emplace(session.vehicle_id, std::move(load));
  }
  return profile;
}

}  // namespace flexmat
