#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flexmat {

// Base class for all library errors. CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad config file, bad CSV row, inconsistent options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure (open/read/write).
class IoError : public Error {
 public:
  using Error::Error;
};

// min_load_separable was handed coupled constraints; use the flow solver.
class CapacityGroupsPresentError : public Error {
 public:
  CapacityGroupsPresentError()
      : Error("constraint set has capacity constraints; the separable solver "
              "does not apply") {}
};

// No joint schedule can deliver every vehicle's energy requirement.
class JointlyInfeasibleError : public Error {
 public:
  JointlyInfeasibleError(std::string what, std::vector<std::string> vehicles)
      : Error(std::move(what)), undeliverable(std::move(vehicles)) {}

  // Vehicles whose supply stayed unsaturated in the maximum flow found.
  std::vector<std::string> undeliverable;
};

// Quantized energies exceed the safe integer range for flow capacities.
class QuantizationOverflowError : public Error {
 public:
  using Error::Error;
};

// The enumeration oracle refuses instances beyond its hard size limits.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling exhausted its retry budget for an archetype.
class ArchetypeInfeasibleError : public Error {
 public:
  using Error::Error;
};

// The horizon cannot contain the archetype's truncation bounds.
class HorizonTooShortError : public Error {
 public:
  using Error::Error;
};

class EmptyFleetError : public Error {
 public:
  EmptyFleetError() : Error("operation requires a nonempty session list") {}
};

// Heatmap rendering needs at least one valid matrix cell.
class AllMaskedError : public Error {
 public:
  AllMaskedError() : Error("matrix has no valid cells to render") {}
};

}  // namespace flexmat
