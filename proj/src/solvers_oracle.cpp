#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "flexmat/solvers.hpp"

namespace flexmat {

namespace {

// Delivered grid units per vehicle, capped at each vehicle's requirement.
// Unused lanes stay zero so the array orders lexicographically.
using State = std::array<int, kOracleMaxVehicles>;

struct Node {
  double cost = 0.0;
  State parent{};
  State levels{};  // grid levels charged in the slot leading to this state
};

using Layer = std::map<State, Node>;

// Group sums are compared against capacities with a small absolute slack so
// that exact-boundary combinations survive double rounding.
constexpr double kCapacitySlackKw = 1e-9;

struct OracleProblem {
  const ConstraintSet* constraints = nullptr;
  int num_vehicles = 0;
  int grid_points = 0;
  double delta = 0.0;
  std::array<double, kOracleMaxVehicles> step_kw{};       // r_i / G
  std::array<double, kOracleMaxVehicles> step_kwh{};      // r_i * delta / G
  std::array<int, kOracleMaxVehicles> required_units{};   // U_i
  std::array<int, kOracleMaxVehicles> group_of{};         // -1 when ungrouped
  // dwell_from[i][tau] = number of dwell slots of vehicle i in [tau, T-1].
  std::vector<std::array<int, kOracleMaxVehicles>> dwell_from;

  bool present(int vehicle, int slot) const {
    const ChargeSession& s = constraints->sessions[vehicle];
    return slot >= s.arrival_slot && slot <= s.departure_slot;
  }

  bool combo_fits_capacity(const State& levels) const {
    const auto& groups = constraints->capacity_groups;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      double sum_kw = 0.0;
      for (int i = 0; i < num_vehicles; ++i) {
        if (group_of[i] == static_cast<int>(g)) {
          sum_kw += levels[i] * step_kw[i];
        }
      }
      if (sum_kw > groups[g].capacity_kw + kCapacitySlackKw) {
        return false;
      }
    }
    if (constraints->global_capacity_kw) {
      double sum_kw = 0.0;
      for (int i = 0; i < num_vehicles; ++i) {
        sum_kw += levels[i] * step_kw[i];
      }
      if (sum_kw > *constraints->global_capacity_kw + kCapacitySlackKw) {
        return false;
      }
    }
    return true;
  }
};

// One forward pass over all slots. With prune set, states that can no
// longer reach every requirement are dropped early; the optimum is
// unaffected, only dead branches. Ties keep the first candidate in
// (state, combo) iteration order, which makes the result deterministic.
std::vector<Layer> run_forward(const OracleProblem& problem,
                               const Horizon& horizon, const Window& window,
                               bool prune) {
  const int num_slots = horizon.num_slots;
  std::vector<Layer> layers(num_slots + 1);
  layers[0].emplace(State{}, Node{});

  for (int tau = 0; tau < num_slots; ++tau) {
    const bool in_window = window.contains(tau);
    for (const auto& [state, node] : layers[tau]) {
      // Levels above the remaining requirement only waste shared capacity;
      // an equal-or-cheaper schedule always exists without them.
      State max_levels{};
      for (int i = 0; i < problem.num_vehicles; ++i) {
        max_levels[i] =
            problem.present(i, tau)
                ? std::min(problem.grid_points,
                           problem.required_units[i] - state[i])
                : 0;
      }

      State levels{};
      while (true) {
        if (problem.combo_fits_capacity(levels)) {
          State next = state;
          double added_cost = 0.0;
          bool reachable = true;
          for (int i = 0; i < problem.num_vehicles; ++i) {
            next[i] += levels[i];
            if (in_window) {
              added_cost += levels[i] * problem.step_kwh[i];
            }
          }
          if (prune) {
            for (int i = 0; i < problem.num_vehicles; ++i) {
              const int future_capacity =
                  problem.grid_points * problem.dwell_from[tau + 1][i];
              if (next[i] + future_capacity < problem.required_units[i]) {
                reachable = false;
                break;
              }
            }
          }
          if (reachable) {
            const double total = node.cost + added_cost;
            auto [it, inserted] =
                layers[tau + 1].try_emplace(next, Node{total, state, levels});
            if (!inserted && total < it->second.cost) {
              it->second = Node{total, state, levels};
            }
          }
        }
        // Odometer increment, last vehicle fastest.
        int j = problem.num_vehicles - 1;
        for (; j >= 0; --j) {
          if (levels[j] < max_levels[j]) {
            ++levels[j];
            break;
          }
          levels[j] = 0;
        }
        if (j < 0) {
          break;
        }
      }
    }
  }
  return layers;
}

}  // namespace

MinLoadSolution min_load_oracle(const ConstraintSet& constraints,
                                const Horizon& horizon, const Window& window,
                                int grid_points) {
  validate_constraint_set(constraints, horizon);
  if (!window.fits(horizon)) {
    std::ostringstream msg;
    msg << "window [start " << window.start_slot << ", length "
        << window.length_slots << "] does not fit a horizon of "
        << horizon.num_slots << " slots";
    throw ConfigError(msg.str());
  }
  if (grid_points < 1) {
    throw ConfigError("grid_points must be positive");
  }
  const int num_vehicles = static_cast<int>(constraints.sessions.size());
  if (num_vehicles > kOracleMaxVehicles ||
      horizon.num_slots > kOracleMaxSlots) {
    std::ostringstream msg;
    msg << "oracle accepts at most " << kOracleMaxVehicles << " vehicles and "
        << kOracleMaxSlots << " slots, got " << num_vehicles << " and "
        << horizon.num_slots;
    throw InstanceTooLargeError(msg.str());
  }

  MinLoadSolution solution;
  solution.window = window;
  solution.schedule.horizon = horizon;
  solution.schedule.aggregate.assign(horizon.num_slots, 0.0);
  if (num_vehicles == 0) {
    return solution;
  }

  OracleProblem problem;
  problem.constraints = &constraints;
  problem.num_vehicles = num_vehicles;
  problem.grid_points = grid_points;
  problem.delta = horizon.slot_duration_hours;
  for (int i = 0; i < num_vehicles; ++i) {
    const ChargeSession& session = constraints.sessions[i];
    problem.step_kw[i] = session.max_rate_kw / grid_points;
    problem.step_kwh[i] = problem.step_kw[i] * problem.delta;
    problem.required_units[i] =
        session.energy_kwh == 0.0
            ? 0
            : static_cast<int>(std::ceil(
                  session.energy_kwh / problem.step_kwh[i] - 1e-9));
    problem.group_of[i] = -1;
  }
  for (std::size_t g = 0; g < constraints.capacity_groups.size(); ++g) {
    for (const std::string& id :
         constraints.capacity_groups[g].member_vehicle_ids) {
      for (int i = 0; i < num_vehicles; ++i) {
        if (constraints.sessions[i].vehicle_id == id) {
          problem.group_of[i] = static_cast<int>(g);
        }
      }
    }
  }
  problem.dwell_from.assign(horizon.num_slots + 1, {});
  for (int tau = horizon.num_slots - 1; tau >= 0; --tau) {
    for (int i = 0; i < num_vehicles; ++i) {
      problem.dwell_from[tau][i] =
          problem.dwell_from[tau + 1][i] + (problem.present(i, tau) ? 1 : 0);
    }
  }

  State target{};
  for (int i = 0; i < num_vehicles; ++i) {
    target[i] = problem.required_units[i];
  }

  std::vector<Layer> layers = run_forward(problem, horizon, window, true);
  const Layer& final_layer = layers[horizon.num_slots];
  if (final_layer.find(target) == final_layer.end()) {
    // No grid point meets every requirement. Rerun without pruning to name
    // the vehicles that fall short at the best-delivery end state.
    std::vector<Layer> full = run_forward(problem, horizon, window, false);
    const Layer& last = full[horizon.num_slots];
    State best{};
    double best_kwh = -1.0;
    for (const auto& [state, node] : last) {
      double delivered_kwh = 0.0;
      for (int i = 0; i < num_vehicles; ++i) {
        delivered_kwh += state[i] * problem.step_kwh[i];
      }
      if (delivered_kwh > best_kwh) {
        best_kwh = delivered_kwh;
        best = state;
      }
    }
    std::vector<std::string> undeliverable;
    for (int i = 0; i < num_vehicles; ++i) {
      if (best[i] < problem.required_units[i]) {
        undeliverable.push_back(constraints.sessions[i].vehicle_id);
      }
    }
    std::ostringstream msg;
    msg << "no schedule on the " << grid_points
        << "-point rate grid meets every requirement; "
        << undeliverable.size() << " of " << num_vehicles
        << " vehicles fall short";
    throw JointlyInfeasibleError(msg.str(), std::move(undeliverable));
  }

  // Walk parents back from the target to recover the schedule.
  std::vector<State> chosen(horizon.num_slots);
  State cursor = target;
  for (int tau = horizon.num_slots - 1; tau >= 0; --tau) {
    const Node& node = layers[tau + 1].at(cursor);
    chosen[tau] = node.levels;
    cursor = node.parent;
  }

  for (int i = 0; i < num_vehicles; ++i) {
    std::vector<double> load(horizon.num_slots, 0.0);
    for (int tau = 0; tau < horizon.num_slots; ++tau) {
      const double rate_kw = chosen[tau][i] * problem.step_kw[i];
      load[tau] = rate_kw;
      solution.schedule.aggregate[tau] += rate_kw;
    }
    solution.schedule.per_vehicle.emplace(constraints.sessions[i].vehicle_id,
                                          std::move(load));
  }
  solution.in_window_energy_kwh = final_layer.at(target).cost;
  return solution;
}

double oracle_gap_kwh(const ConstraintSet& constraints, const Horizon& horizon,
                      const Window& window, int grid_points) {
  double max_rate_kw = 0.0;
  for (const ChargeSession& session : constraints.sessions) {
    max_rate_kw = std::max(max_rate_kw, session.max_rate_kw);
  }
  return (max_rate_kw / grid_points) * window.length_slots *
         static_cast<double>(constraints.sessions.size()) *
         horizon.slot_duration_hours;
}

}  // namespace flexmat
