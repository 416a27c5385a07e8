#include <algorithm>
#include <cmath>
#include <sstream>

#include "flexmat/solvers.hpp"

namespace flexmat {

namespace {

void require_window_fits(const Window& window, const Horizon& horizon) {
  if (!window.fits(horizon)) {
    std::ostringstream msg;
    msg << "window [start " << window.start_slot << ", length "
        << window.length_slots << "] does not fit a horizon of "
        << horizon.num_slots << " slots";
    throw ConfigError(msg.str());
  }
}

// Fills `slots` in order at up to max_rate_kw each; the last touched slot
// runs at the fractional rate that makes the delivered energy exact.
void place_energy(std::vector<double>& load, const std::vector<int>& slots,
                  double energy_kwh, double max_rate_kw, double delta) {
  if (energy_kwh <= 0.0 || slots.empty()) {
    return;
  }
  const double slot_energy = max_rate_kw * delta;
  const double ratio = energy_kwh / slot_energy;
  const int count = static_cast<int>(slots.size());
  const int full = ratio >= count ? count : static_cast<int>(ratio);
  for (int i = 0; i < full; ++i) {
    load[slots[i]] = max_rate_kw;
  }
  const double remainder = energy_kwh - full * slot_energy;
  if (remainder > 0.0 && full < count) {
    load[slots[full]] = std::min(remainder / delta, max_rate_kw);
  }
}

}  // namespace

MinLoadSolution min_load_separable(const std::vector<ChargeSession>& sessions,
                                   const Horizon& horizon,
                                   const Window& window) {
  require_window_fits(window, horizon);

  MinLoadSolution solution;
  solution.window = window;
  solution.schedule.horizon = horizon;
  solution.schedule.aggregate.assign(horizon.num_slots, 0.0);

  const double delta = horizon.slot_duration_hours;
  double total_in_window = 0.0;

  for (const ChargeSession& session : sessions) {
    const SessionValidation check = validate_session(session, horizon);
    if (!check.ok()) {
      throw ConfigError(std::string(to_string(*check.fault)) + ": " +
                        check.detail);
    }

    // Out-of-window dwell slots earliest-first, in-window latest-first.
    std::vector<int> out_slots;
    std::vector<int> in_slots;
    for (int slot = session.arrival_slot; slot <= session.departure_slot;
         ++slot) {
      (window.contains(slot) ? in_slots : out_slots).push_back(slot);
    }
    std::reverse(in_slots.begin(), in_slots.end());

    const double out_capacity =
        session.max_rate_kw * delta * static_cast<double>(out_slots.size());
    const double in_energy = std::max(0.0, session.energy_kwh - out_capacity);
    const double out_energy = session.energy_kwh - in_energy;

    std::vector<double> load(horizon.num_slots, 0.0);
    place_energy(load, out_slots, out_energy, session.max_rate_kw, delta);
    place_energy(load, in_slots, in_energy, session.max_rate_kw, delta);

    total_in_window += in_energy;
    for (int tau = 0; tau < horizon.num_slots; ++tau) {
      solution.schedule.aggregate[tau] += load[tau];
    }
    solution.schedule.per_vehicle.emplace(session.vehicle_id, std::move(load));
  }

  solution.in_window_energy_kwh = total_in_window;
  return solution;
}

MinLoadSolution min_load_separable(const ConstraintSet& constraints,
                                   const Horizon& horizon,
                                   const Window& window) {
  if (constraints.has_coupling()) {
    throw CapacityGroupsPresentError();
  }
  return min_load_separable(constraints.sessions, horizon, window);
}

double separable_in_window_energy(const std::vector<ChargeSession>& sessions,
                                  const Horizon& horizon,
                                  const Window& window) {
  const double delta = horizon.slot_duration_hours;
  double total = 0.0;
  for (const ChargeSession& session : sessions) {
    const int lo = std::max(session.arrival_slot, window.start_slot);
    const int hi = std::min(session.departure_slot, window.end_slot() - 1);
    const int n_in = hi >= lo ? hi - lo + 1 : 0;
    const int n_out = session.dwell_slots() - n_in;
    const double out_capacity =
        session.max_rate_kw * delta * static_cast<double>(n_out);
    total += std::max(0.0, session.energy_kwh - out_capacity);
  }
  return total;
}

}  // namespace flexmat
