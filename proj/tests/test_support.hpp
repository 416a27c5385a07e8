#pragma once

// Shared fixtures and process helpers for the test binaries.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "flexmat/core.hpp"

namespace test_support {

inline flexmat::ChargeSession session(std::string id, int arrival,
                                      int departure, double energy_kwh,
                                      double max_rate_kw) {
  flexmat::ChargeSession s;
  s.vehicle_id = std::move(id);
  s.arrival_slot = arrival;
  s.departure_slot = departure;
  s.energy_kwh = energy_kwh;
  s.max_rate_kw = max_rate_kw;
  return s;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

// Runs a shell command, capturing combined output and the exit code.
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  const std::string wrapped = command + " 2>&1";
  FILE* pipe = popen(wrapped.c_str(), "r");
  if (pipe == nullptr) {
    return result;
  }
  char buffer[4096];
  std::size_t got = 0;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  return result;
}

// Fresh per-binary scratch directory under the test working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::path("scratch") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Uniform draw in [0, 1) matching no particular library convention; tests
// only need reproducible variety, not specific marginals.
inline double uniform01(std::mt19937_64& engine) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine);
}

inline int uniform_int(std::mt19937_64& engine, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine);
}

}  // namespace test_support
