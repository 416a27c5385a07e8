#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexmat/errors.hpp"

namespace flexmat {

// Discrete time grid: num_slots slots of slot_duration_hours each.
// Slot index tau ranges over [0, num_slots-1]; slot tau covers the clock
// interval [tau*delta, (tau+1)*delta).
struct Horizon {
  int num_slots = 0;                 // T >= 1
  double slot_duration_hours = 1.0;  // delta > 0

  bool valid() const {
    return num_slots >= 1 && slot_duration_hours > 0.0;
  }
};

// One vehicle's dwell window, energy requirement, and rate limit.
// departure_slot is the last slot the vehicle is present (inclusive), so the
// dwell is (departure_slot - arrival_slot + 1) slots long.
struct ChargeSession {
  std::string vehicle_id;
  int arrival_slot = 0;
  int departure_slot = 0;
  double energy_kwh = 0.0;
  double max_rate_kw = 0.0;

  int dwell_slots() const { return departure_slot - arrival_slot + 1; }
};

// A set of vehicles sharing a power limit (e.g. one transformer). Groups
// must form a partition: no vehicle may appear in two groups.
struct CapacityGroup {
  std::vector<std::string> member_vehicle_ids;
  double capacity_kw = 0.0;
};

// Vehicle-separable constraints plus optional coupling capacity limits.
// global_capacity_kw, when set, caps the whole fleet's aggregate rate on top
// of any per-group limits.
struct ConstraintSet {
  std::vector<ChargeSession> sessions;
  std::vector<CapacityGroup> capacity_groups;
  std::optional<double> global_capacity_kw;

  bool has_coupling() const {
    return !capacity_groups.empty() || global_capacity_kw.has_value();
  }
};

// Per-slot power series in kW. per_vehicle may be empty (aggregate only);
// when populated, aggregate[tau] equals the sum over vehicles at every slot.
struct LoadProfile {
  Horizon horizon;
  std::map<std::string, std::vector<double>> per_vehicle;
  std::vector<double> aggregate;
};

enum class SessionFault {
  BadOrdering,       // arrival_slot > departure_slot
  OutOfHorizon,      // arrival_slot < 0 or departure_slot >= num_slots
  InfeasibleEnergy,  // energy_kwh > max_rate_kw * delta * dwell_slots
  BadValue,          // energy_kwh < 0, max_rate_kw <= 0, or non-finite input
};

const char* to_string(SessionFault fault);

struct SessionValidation {
  std::optional<SessionFault> fault;  // empty means the session is valid
  std::string detail;

  bool ok() const { return !fault.has_value(); }
};

struct FeasibilityReport {
  // Vehicles whose requirement stayed unsaturated; empty means feasible.
  std::vector<std::string> undeliverable;
  std::string detail;

  bool ok() const { return undeliverable.empty(); }
};

// Checks one session against the horizon. Faults are reported in the order
// BadValue, BadOrdering, OutOfHorizon, InfeasibleEnergy.
SessionValidation validate_session(const ChargeSession& session,
                                   const Horizon& horizon);

// Structural checks on a whole constraint set: valid horizon, every session
// individually valid, unique vehicle ids, group members present and disjoint,
// positive capacities. Throws ConfigError on violation.
void validate_constraint_set(const ConstraintSet& constraints,
                             const Horizon& horizon);

// Baseline unmanaged charging: each vehicle charges at max_rate_kw from its
// arrival slot onward; the final slot charges at the fractional rate needed
// to deliver energy_kwh exactly. Capacity constraints are deliberately
// ignored; this is the no-control baseline. Requires valid sessions.
LoadProfile uncoordinated_profile(const std::vector<ChargeSession>& sessions,
                                  const Horizon& horizon);

// Decides whether a joint schedule exists under rate, energy, dwell, and
// capacity constraints, by saturating a zero-cost flow network quantized at
// quantum_kwh. Sessions must be individually valid. Throws ConfigError on
// structural violations; never throws for plain infeasibility.
FeasibilityReport validate_feasibility(const ConstraintSet& constraints,
                                       const Horizon& horizon,
                                       double quantum_kwh = 0.001);

}  // namespace flexmat
