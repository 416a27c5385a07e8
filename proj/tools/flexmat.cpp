#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "flexmat/config.hpp"
#include "flexmat/csv.hpp"
#include "flexmat/matrix.hpp"
#include "flexmat/svg.hpp"
#include "flexmat/verify.hpp"

namespace {

using namespace flexmat;

// Exit codes: 0 success, 1 configuration error, 2 infeasible fleet,
// 3 I/O failure, 4 verification bound violation.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerifyFailed = 4;

template <typename Body>
int run_guarded(const Body& body) {
  try {
    return body();
  } catch (const IoError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitIo;
  } catch (const JointlyInfeasibleError& error) {
    std::cerr << "error: " << error.what() << "\n";
    for (const std::string& id : error.undeliverable) {
      std::cerr << "  undeliverable: " << id << "\n";
    }
    return kExitInfeasible;
  } catch (const ArchetypeInfeasibleError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitConfig;
  }
}

struct CommonArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> sessions_path;
  std::optional<std::string> archetype_path;
  std::optional<int> fleet_size;
  std::optional<int> num_samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_delay;
  std::optional<std::string> normalization;
  std::optional<std::string> out_csv;
  std::optional<std::string> out_svg;
  std::optional<int> threads;
};

RunConfig assemble_config(const CommonArgs& args) {
  RunConfig config =
      args.config_path ? load_run_config(*args.config_path) : RunConfig{};
  if (args.sessions_path) {
    config.sessions_csv = *args.sessions_path;
  }
  if (args.archetype_path) {
    config.archetype_path = *args.archetype_path;
  }
  if (args.fleet_size) {
    config.fleet_size = *args.fleet_size;
  }
  if (args.num_samples) {
    config.num_samples = *args.num_samples;
  }
  if (args.seed) {
    config.rng_seed = *args.seed;
  }
  if (args.max_delay) {
    config.max_delay = *args.max_delay;
  }
  if (args.normalization) {
    config.normalization = parse_normalization(*args.normalization);
  }
  if (args.out_csv) {
    config.out_csv = *args.out_csv;
  }
  if (args.out_svg) {
    config.out_svg = *args.out_svg;
  }
  if (args.threads) {
    config.threads = *args.threads;
  }
  return config;
}

int resolve_threads(int configured) {
  if (configured > 0) {
    return configured;
  }
  const unsigned hardware = std::thread::hardware_concurrency();
  return hardware > 0 ? static_cast<int>(hardware) : 1;
}

std::string clock_time(double horizon_start_hour, double slot_offset_hours) {
  const double hour = std::fmod(horizon_start_hour + slot_offset_hours, 24.0);
  const int whole = static_cast<int>(hour);
  const int minutes = static_cast<int>(std::lround((hour - whole) * 60.0));
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%02d:%02d", whole, minutes);
  return buffer;
}

void print_matrix_summary(const ReductionPotentialMatrix& matrix,
                          double horizon_start_hour) {
  const char* unit = matrix.normalization == Normalization::kPerVehicle
                         ? "kW per vehicle"
                         : "kW";
  double peak = 0.0;
  int peak_k = 1;
  int peak_t = 0;
  bool seen = false;
  for (int k = 1; k <= matrix.rows(); ++k) {
    for (int t = 0; t < matrix.cols(); ++t) {
      if (matrix.valid(k, t) && (!seen || matrix.at(k, t) > peak)) {
        peak = matrix.at(k, t);
        peak_k = k;
        peak_t = t;
        seen = true;
      }
    }
  }
  const double delta = matrix.horizon.slot_duration_hours;
  std::cout << "peak reduction potential: " << peak << " " << unit
            << " at window start t=" << peak_t << " ("
            << clock_time(horizon_start_hour, peak_t * delta)
            << "), length k=" << peak_k << "\n";

  double first_row_kwh = 0.0;
  for (int t = 0; t < matrix.cols(); ++t) {
    if (matrix.valid(1, t)) {
      first_row_kwh += matrix.at(1, t) * delta;
    }
  }
  const char* energy_unit = matrix.normalization == Normalization::kPerVehicle
                                ? "kWh per vehicle"
                                : "kWh";
  std::cout << "first-row shiftable energy: " << first_row_kwh << " "
            << energy_unit
            << " (summed over single-slot windows; windows trade off "
               "against each other, so this is not a simultaneous-dispatch "
               "guarantee)\n";
  if (matrix.has_negative_cells) {
    std::cout << "note: some cells are negative; capacity limits force more "
                 "in-window load than the unmanaged baseline\n";
  }
}

void divide_by_fleet_size(ReductionPotentialMatrix& matrix) {
  for (std::size_t i = 0; i < matrix.values.size(); ++i) {
    if (matrix.valid_mask[i] != 0) {
      matrix.values[i] /= matrix.num_vehicles;
    }
  }
  matrix.normalization = Normalization::kPerVehicle;
}

int cmd_matrix(const CommonArgs& args) {
  RunConfig config = assemble_config(args);
  validate_run_config(config);
  const int threads = resolve_threads(config.threads);

  ReductionPotentialMatrix matrix;
  if (config.sessions_csv) {
    ConstraintSet constraints;
    constraints.sessions = read_sessions_csv(*config.sessions_csv);
    constraints.capacity_groups = config.capacity_groups;
    constraints.global_capacity_kw = config.global_capacity_kw;

    const FeasibilityReport feasibility =
        validate_feasibility(constraints, config.horizon);
    if (!feasibility.ok()) {
      std::cerr << "error: " << feasibility.detail << "\n";
      for (const std::string& id : feasibility.undeliverable) {
        std::cerr << "  undeliverable: " << id << "\n";
      }
      return kExitInfeasible;
    }
    matrix = build_matrix(constraints, config.horizon, config.max_delay,
                          kDefaultQuantumKwh, threads);
    if (config.normalization == Normalization::kPerVehicle) {
      divide_by_fleet_size(matrix);
    }
  } else {
    const FleetArchetype archetype =
        load_archetype_json(*config.archetype_path);
    const MonteCarloSpec spec{config.fleet_size, config.num_samples,
                              config.rng_seed};
    matrix = monte_carlo_matrix(archetype, spec, config.horizon,
                                config.max_delay, config.normalization,
                                config.horizon_start_hour, threads);
  }

  if (config.out_csv) {
    write_matrix_csv(*config.out_csv, matrix);
    std::cout << "wrote " << *config.out_csv << "\n";
  }
  if (config.out_svg) {
    render_heatmap(matrix, *config.out_svg, config.horizon_start_hour);
    std::cout << "wrote " << *config.out_svg << "\n";
  }
  print_matrix_summary(matrix, config.horizon_start_hour);
  return kExitOk;
}

int cmd_sample(const CommonArgs& args) {
  RunConfig config = assemble_config(args);
  if (!config.archetype_path) {
    throw ConfigError("sample requires --archetype");
  }
  const FleetArchetype archetype = load_archetype_json(*config.archetype_path);
  const std::vector<ChargeSession> fleet =
      sample_fleet(archetype, config.fleet_size, config.horizon,
                   config.rng_seed, config.horizon_start_hour);
  if (config.out_csv) {
    write_sessions_csv(*config.out_csv, fleet);
    std::cout << "wrote " << fleet.size() << " sessions to "
              << *config.out_csv << "\n";
  } else {
    std::cout << sessions_to_csv(fleet);
  }
  return kExitOk;
}

int cmd_verify(const VerifyOptions& options) {
  const VerifyReport report = run_verification(options);
  std::cout << format_report(report);
  return report.ok() ? kExitOk : kExitVerifyFailed;
}

int cmd_heatmap(const std::string& input_csv, const CommonArgs& args) {
  RunConfig config = assemble_config(args);
  if (!config.out_svg) {
    throw ConfigError("heatmap requires --out-svg");
  }
  ReductionPotentialMatrix matrix = read_matrix_csv(input_csv);
  // The CSV carries only shape and values; clock labels come from the
  // config's slot duration and start hour (defaults: 1 h slots, noon).
  matrix.horizon.slot_duration_hours = config.horizon.slot_duration_hours;
  matrix.normalization = config.normalization;
  render_heatmap(matrix, *config.out_svg, config.horizon_start_hour);
  std::cout << "wrote " << *config.out_svg << "\n";
  return kExitOk;
}

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "JSON run configuration (flags override it)");
  cmd->add_option("--sessions", args.sessions_path,
                  "sessions CSV input path");
  cmd->add_option("--archetype", args.archetype_path,
                  "archetype JSON input path");
  cmd->add_option("--fleet-size", args.fleet_size,
                  "vehicles per sampled fleet");
  cmd->add_option("--samples", args.num_samples, "Monte Carlo sample count");
  cmd->add_option("--seed", args.seed, "RNG seed");
  cmd->add_option("--max-delay", args.max_delay,
                  "largest window length D in slots");
  cmd->add_option("--normalization", args.normalization,
                  "aggregate or per-vehicle");
  cmd->add_option("--out-csv", args.out_csv, "matrix CSV output path");
  cmd->add_option("--out-svg", args.out_svg, "heatmap SVG output path");
  cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EV fleet charging flexibility: reduction potential matrices"};
  app.require_subcommand(1);

  CommonArgs matrix_args;
  CLI::App* matrix_cmd = app.add_subcommand(
      "matrix", "compute a reduction potential matrix");
  add_common_flags(matrix_cmd, matrix_args);

  CommonArgs sample_args;
  CLI::App* sample_cmd = app.add_subcommand(
      "sample", "emit one generated fleet as sessions CSV");
  add_common_flags(sample_cmd, sample_args);

  VerifyOptions verify_options;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "cross-check the solvers against the brute-force oracle");
  verify_cmd->add_option("--trials", verify_options.trials,
                         "number of random instances");
  verify_cmd->add_option("--seed", verify_options.rng_seed, "RNG seed");
  verify_cmd->add_option("--grid-points", verify_options.grid_points,
                         "oracle rate-grid resolution");
  verify_cmd
      ->add_option("--inject-discrepancy", verify_options.inject_discrepancy_kwh,
                   "perturb the flow result by this many kWh (negative "
                   "control for the harness itself)")
      ->group("");  // hidden

  CommonArgs heatmap_args;
  std::string heatmap_input;
  CLI::App* heatmap_cmd = app.add_subcommand(
      "heatmap", "render a matrix CSV as an SVG heatmap");
  heatmap_cmd->add_option("input", heatmap_input, "matrix CSV path")
      ->required();
  add_common_flags(heatmap_cmd, heatmap_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kExitConfig;
  }

  if (matrix_cmd->parsed()) {
    return run_guarded([&] { return cmd_matrix(matrix_args); });
  }
  if (sample_cmd->parsed()) {
    return run_guarded([&] { return cmd_sample(sample_args); });
  }
  if (verify_cmd->parsed()) {
    return run_guarded([&] { return cmd_verify(verify_options); });
  }
  if (heatmap_cmd->parsed()) {
    return run_guarded([&] { return cmd_heatmap(heatmap_input, heatmap_args); });
  }
  return kExitConfig;
}
