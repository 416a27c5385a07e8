#include "flexmat/verify.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "flexmat/matrix.hpp"

namespace flexmat {

namespace {

// Comparison slack for accumulated double rounding on top of the analytic
// bounds; far below the quantization term the bounds already include.
constexpr double kFloatSlackKwh = 1e-12;

int draw_int(std::mt19937_64& engine, int lo, int hi) {
  return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(
                                   hi - lo + 1));
}

std::string describe_instance(const RandomInstance& instance) {
  std::ostringstream out;
  out << "seed " << instance.seed << ": T=" << instance.horizon.num_slots
      << " delta=" << instance.horizon.slot_duration_hours << " window=[t "
      << instance.window.start_slot << ", k " << instance.window.length_slots
      << "]";
  for (const ChargeSession& s : instance.constraints.sessions) {
    out << "; " << s.vehicle_id << "(a=" << s.arrival_slot
        << ", d=" << s.departure_slot << ", e=" << s.energy_kwh
        << ", r=" << s.max_rate_kw << ")";
  }
  for (const CapacityGroup& group : instance.constraints.capacity_groups) {
    out << "; group C=" << group.capacity_kw << " {";
    for (std::size_t i = 0; i < group.member_vehicle_ids.size(); ++i) {
      out << (i ? "," : "") << group.member_vehicle_ids[i];
    }
    out << "}";
  }
  if (instance.constraints.global_capacity_kw) {
    out << "; global C=" << *instance.constraints.global_capacity_kw;
  }
  return out.str();
}

struct FeasibleDraw {
  RandomInstance instance;
  MinLoadSolution oracle;
};

FeasibleDraw find_feasible(std::uint64_t seed, bool with_capacity,
                           int grid_points) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const std::uint64_t candidate =
        attempt == 0 ? seed : monte_carlo_sample_seed(seed, attempt);
    RandomInstance instance = generate_small_instance(candidate, with_capacity);
    if (with_capacity &&
        !validate_feasibility(instance.constraints, instance.horizon).ok()) {
      continue;
    }
    try {
      MinLoadSolution oracle =
          min_load_oracle(instance.constraints, instance.horizon,
                          instance.window, grid_points);
      return {std::move(instance), std::move(oracle)};
    } catch (const JointlyInfeasibleError&) {
      // The flow network accepted the instance but the rate grid has no
      // feasible point; resample rather than compare incomparable solvers.
      continue;
    }
  }
  std::ostringstream msg;
  msg << "no feasible instance found within 10000 draws from seed " << seed;
  throw Error(msg.str());
}

}  // namespace

RandomInstance generate_small_instance(std::uint64_t seed,
                                       bool with_capacity) {
  std::mt19937_64 engine(seed);
  RandomInstance instance;
  instance.seed = seed;

  const int num_slots = draw_int(engine, 3, 6);
  const double delta = draw_int(engine, 0, 1) == 0 ? 0.5 : 1.0;
  instance.horizon = {num_slots, delta};

  const int num_vehicles = draw_int(engine, 1, 3);
  // Grid-aligned parameters: rates from {2,3,4,6} kW, energies in quarter
  // multiples of the per-slot maximum r*delta, capacities in quarters of r.
  // Coupled instances share one rate so that every optimal vertex of the
  // min-load LP lands exactly on a 4-point-per-vehicle rate grid, making
  // the oracle comparison exact rather than merely bounded.
  static constexpr int kRates[4] = {2, 3, 4, 6};
  const int shared_rate = kRates[draw_int(engine, 0, 3)];
  for (int i = 0; i < num_vehicles; ++i) {
    ChargeSession session;
    session.vehicle_id = "v" + std::to_string(i);
    session.max_rate_kw =
        with_capacity ? shared_rate : kRates[draw_int(engine, 0, 3)];
    session.arrival_slot = draw_int(engine, 0, num_slots - 1);
    session.departure_slot =
        draw_int(engine, session.arrival_slot, num_slots - 1);
    const int quarter_slots = 4 * session.dwell_slots();
    session.energy_kwh = draw_int(engine, 0, quarter_slots) *
                         (session.max_rate_kw * delta / 4.0);
    instance.constraints.sessions.push_back(std::move(session));
  }

  if (with_capacity) {
    const int member_mask = draw_int(engine, 1, (1 << num_vehicles) - 1);
    CapacityGroup group;
    for (int i = 0; i < num_vehicles; ++i) {
      if (member_mask & (1 << i)) {
        group.member_vehicle_ids.push_back("v" + std::to_string(i));
      }
    }
    group.capacity_kw = draw_int(engine, 1, 12) * (shared_rate / 4.0);
    instance.constraints.capacity_groups.push_back(std::move(group));
    if (draw_int(engine, 0, 1) == 1) {
      instance.constraints.global_capacity_kw =
          draw_int(engine, 1, 20) * (shared_rate / 4.0);
    }
  }

  instance.window.start_slot = draw_int(engine, 0, num_slots - 1);
  instance.window.length_slots =
      draw_int(engine, 1, num_slots - instance.window.start_slot);
  return instance;
}

RandomInstance next_feasible_instance(std::uint64_t seed, bool with_capacity,
                                      int grid_points) {
  return find_feasible(seed, with_capacity, grid_points).instance;
}

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  report.worst_oracle_margin_kwh =
      -std::numeric_limits<double>::infinity();
  report.worst_separable_margin_kwh =
      -std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < options.trials; ++trial) {
    const bool with_capacity = trial % 2 == 1;
    const FeasibleDraw draw =
        find_feasible(monte_carlo_sample_seed(options.rng_seed, trial),
                      with_capacity, options.grid_points);
    const RandomInstance& instance = draw.instance;
    ++report.trials;
    if (with_capacity) {
      ++report.capacity_trials;
    }

    const double flow_kwh =
        min_load_flow(instance.constraints, instance.horizon, instance.window,
                      options.quantum_kwh)
            .in_window_energy_kwh +
        options.inject_discrepancy_kwh;
    const double n =
        static_cast<double>(instance.constraints.sessions.size());

    const double oracle_bound =
        oracle_gap_kwh(instance.constraints, instance.horizon, instance.window,
                       options.grid_points) +
        n * options.quantum_kwh + kFloatSlackKwh;
    const double oracle_diff =
        std::abs(flow_kwh - draw.oracle.in_window_energy_kwh);
    report.max_flow_vs_oracle_kwh =
        std::max(report.max_flow_vs_oracle_kwh, oracle_diff);
    report.worst_oracle_margin_kwh =
        std::max(report.worst_oracle_margin_kwh, oracle_diff - oracle_bound);
    if (oracle_diff > oracle_bound) {
      report.failing_seed = instance.seed;
      std::ostringstream msg;
      msg << "flow " << flow_kwh << " kWh vs oracle "
          << draw.oracle.in_window_energy_kwh << " kWh differ by "
          << oracle_diff << " > bound " << oracle_bound << " on "
          << describe_instance(instance);
      report.failure_detail = msg.str();
      break;
    }

    if (!with_capacity) {
      const double separable_kwh = separable_in_window_energy(
          instance.constraints.sessions, instance.horizon, instance.window);
      const double separable_bound =
          n * options.quantum_kwh + kFloatSlackKwh;
      const double separable_diff = std::abs(flow_kwh - separable_kwh);
      report.max_flow_vs_separable_kwh =
          std::max(report.max_flow_vs_separable_kwh, separable_diff);
      report.worst_separable_margin_kwh =
          std::max(report.worst_separable_margin_kwh,
                   separable_diff - separable_bound);
      if (separable_diff > separable_bound) {
        report.failing_seed = instance.seed;
        std::ostringstream msg;
        msg << "flow " << flow_kwh << " kWh vs separable " << separable_kwh
            << " kWh differ by " << separable_diff << " > bound "
            << separable_bound << " on " << describe_instance(instance);
        report.failure_detail = msg.str();
        break;
      }
    }
  }
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  out << "verify: " << report.trials << " trials ("
      << report.capacity_trials << " with capacity constraints)\n";
  if (report.trials > 0) {
    out << "  max |flow - oracle|:    " << report.max_flow_vs_oracle_kwh
        << " kWh (worst margin vs bound "
        << report.worst_oracle_margin_kwh << " kWh)\n";
  }
  if (report.trials - report.capacity_trials > 0) {
    out << "  max |flow - separable|: " << report.max_flow_vs_separable_kwh
        << " kWh (worst margin vs bound "
        << report.worst_separable_margin_kwh << " kWh)\n";
  }
  if (report.ok()) {
    out << "  all solver agreements within bounds\n";
  } else {
    out << "  BOUND VIOLATION: " << report.failure_detail << "\n"
        << "  reproduce with seed " << *report.failing_seed << "\n";
  }
  return out.str();
}

}  // namespace flexmat
