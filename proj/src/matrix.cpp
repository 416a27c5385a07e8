#include "flexmat/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace flexmat {

namespace {

constexpr double kNegativeCellThresholdKw = -1e-9;

void require_matrix_shape(const Horizon& horizon, int max_delay) {
  if (max_delay < 1 || max_delay > horizon.num_slots) {
    std::ostringstream msg;
    msg << "max_delay must lie in [1, " << horizon.num_slots << "], got "
        << max_delay;
    throw ConfigError(msg.str());
  }
}

// Runs job(i) for i in [0, count) across `threads` workers, each striding by
// the worker count, so the set of jobs per index is fixed and results land
// in preallocated slots. The first exception wins and is rethrown.
template <typename Job>
void parallel_for(int count, int threads, const Job& job) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) {
      job(i);
    }
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) {
          job(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& worker : pool) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace

const char* to_string(Normalization normalization) {
  switch (normalization) {
    case Normalization::kAggregate:
      return "aggregate";
    case Normalization::kPerVehicle:
      return "per-vehicle";
  }
  return "?";
}

double ReductionPotentialMatrix::max_valid_value() const {
  double best = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid_mask[i] != 0) {
      best = std::max(best, values[i]);
    }
  }
  return best;
}

bool ReductionPotentialMatrix::any_valid() const {
  return std::any_of(valid_mask.begin(), valid_mask.end(),
                     [](std::uint8_t m) { return m != 0; });
}

double reduction_potential(const ConstraintSet& constraints,
                           const Horizon& horizon, const Window& window,
                           double quantum_kwh) {
  validate_constraint_set(constraints, horizon);
  if (!window.fits(horizon)) {
    throw ConfigError("window does not fit the horizon");
  }
  const LoadProfile baseline =
      uncoordinated_profile(constraints.sessions, horizon);
  double baseline_sum_kw = 0.0;
  for (int tau = window.start_slot; tau < window.end_slot(); ++tau) {
    baseline_sum_kw += baseline.aggregate[tau];
  }
  const double in_window_kwh =
      constraints.has_coupling()
          ? min_load_flow(constraints, horizon, window, quantum_kwh)
                .in_window_energy_kwh
          : separable_in_window_energy(constraints.sessions, horizon, window);
  return (baseline_sum_kw - in_window_kwh / horizon.slot_duration_hours) /
         window.length_slots;
}

ReductionPotentialMatrix build_matrix(const ConstraintSet& constraints,
                                      const Horizon& horizon, int max_delay,
                                      double quantum_kwh, int threads) {
  validate_constraint_set(constraints, horizon);
  require_matrix_shape(horizon, max_delay);
  if (constraints.sessions.empty()) {
    throw EmptyFleetError();
  }

  const int num_slots = horizon.num_slots;
  const double delta = horizon.slot_duration_hours;

  ReductionPotentialMatrix matrix;
  matrix.horizon = horizon;
  matrix.max_delay_slots = max_delay;
  matrix.values.assign(static_cast<std::size_t>(max_delay) * num_slots,
                       std::numeric_limits<double>::quiet_NaN());
  matrix.valid_mask.assign(matrix.values.size(), 0);
  matrix.num_vehicles = static_cast<int>(constraints.sessions.size());

  // The baseline ignores capacity limits by definition; one prefix sum
  // serves every window.
  const LoadProfile baseline =
      uncoordinated_profile(constraints.sessions, horizon);
  std::vector<double> baseline_prefix_kw(num_slots + 1, 0.0);
  for (int tau = 0; tau < num_slots; ++tau) {
    baseline_prefix_kw[tau + 1] =
        baseline_prefix_kw[tau] + baseline.aggregate[tau];
  }

  struct Cell {
    int k;
    int t;
  };
  std::vector<Cell> cells;
  cells.reserve(matrix.values.size());
  for (int k = 1; k <= max_delay; ++k) {
    for (int t = 0; t + k <= num_slots; ++t) {
      cells.push_back({k, t});
    }
  }

  const bool coupled = constraints.has_coupling();
  parallel_for(static_cast<int>(cells.size()), threads, [&](int i) {
    const auto [k, t] = cells[i];
    const Window window{t, k};
    const double baseline_sum_kw =
        baseline_prefix_kw[t + k] - baseline_prefix_kw[t];
    const double in_window_kwh =
        coupled ? min_load_flow(constraints, horizon, window, quantum_kwh)
                      .in_window_energy_kwh
                : separable_in_window_energy(constraints.sessions, horizon,
                                             window);
    const std::size_t index = matrix.index(k, t);
    matrix.values[index] = (baseline_sum_kw - in_window_kwh / delta) / k;
    matrix.valid_mask[index] = 1;
  });

  for (std::size_t i = 0; i < matrix.values.size(); ++i) {
    if (matrix.valid_mask[i] != 0 &&
        matrix.values[i] < kNegativeCellThresholdKw) {
      matrix.has_negative_cells = true;
      break;
    }
  }
  return matrix;
}

std::uint64_t monte_carlo_sample_seed(std::uint64_t rng_seed,
                                      int sample_index) {
  // splitmix64 output stream of rng_seed at position sample_index.
  std::uint64_t z = rng_seed + (static_cast<std::uint64_t>(sample_index) + 1) *
                                   0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ReductionPotentialMatrix monte_carlo_matrix(const FleetArchetype& archetype,
                                            const MonteCarloSpec& spec,
                                            const Horizon& horizon,
                                            int max_delay,
                                            Normalization normalization,
                                            double horizon_start_hour,
                                            int threads) {
  validate_archetype(archetype);
  require_matrix_shape(horizon, max_delay);
  if (spec.fleet_size < 1) {
    throw ConfigError("fleet_size must be at least 1");
  }
  if (spec.num_samples < 1) {
    throw ConfigError("num_samples must be at least 1");
  }

  // Per-sample matrices land in their own slots; the reduction below runs
  // in fixed sample order, so the result is identical for any thread count.
  std::vector<std::vector<double>> sample_values(spec.num_samples);
  parallel_for(spec.num_samples, threads, [&](int j) {
    const std::vector<ChargeSession> fleet =
        sample_fleet(archetype, spec.fleet_size, horizon,
                     monte_carlo_sample_seed(spec.rng_seed, j),
                     horizon_start_hour);
    ConstraintSet constraints;
    constraints.sessions = fleet;
    sample_values[j] =
        build_matrix(constraints, horizon, max_delay).values;
  });

  ReductionPotentialMatrix matrix;
  matrix.horizon = horizon;
  matrix.max_delay_slots = max_delay;
  matrix.normalization = normalization;
  matrix.num_vehicles = spec.fleet_size;
  matrix.values.assign(
      static_cast<std::size_t>(max_delay) * horizon.num_slots,
      std::numeric_limits<double>::quiet_NaN());
  matrix.valid_mask.assign(matrix.values.size(), 0);

  const double scale =
      1.0 / (static_cast<double>(spec.num_samples) *
             (normalization == Normalization::kPerVehicle ? spec.fleet_size
                                                          : 1));
  for (int k = 1; k <= max_delay; ++k) {
    for (int t = 0; t + k <= horizon.num_slots; ++t) {
      const std::size_t index = matrix.index(k, t);
      double sum = 0.0;
      for (int j = 0; j < spec.num_samples; ++j) {
        sum += sample_values[j][index];
      }
      matrix.values[index] = sum * scale;
      matrix.valid_mask[index] = 1;
      if (matrix.values[index] < kNegativeCellThresholdKw) {
        matrix.has_negative_cells = true;
      }
    }
  }
  return matrix;
}

}  // namespace flexmat
