#include "flexmat/config.hpp"

#include <set>
#include <string>

#include <json.hpp>

#include "flexmat/csv.hpp"

namespace flexmat {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string(what) + ": " + error.what());
  }
}

void reject_unknown_keys(const json& object, const std::string& context,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : object.items()) {
    if (known.find(key) == known.end()) {
      throw ConfigError("unknown key '" + key + "' in " + context);
    }
  }
}

const json& require_key(const json& object, const std::string& context,
                        const std::string& key) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ConfigError(context + " is missing required key '" + key + "'");
  }
  return *it;
}

double as_number(const json& value, const std::string& context) {
  if (!value.is_number()) {
    throw ConfigError(context + " must be a number");
  }
  return value.get<double>();
}

int as_int(const json& value, const std::string& context) {
  if (!value.is_number_integer()) {
    throw ConfigError(context + " must be an integer");
  }
  return value.get<int>();
}

std::string as_string(const json& value, const std::string& context) {
  if (!value.is_string()) {
    throw ConfigError(context + " must be a string");
  }
  return value.get<std::string>();
}

TruncatedNormal parse_truncated(const json& object,
                                const std::string& context,
                                const char* mean_key, const char* std_key) {
  if (!object.is_object()) {
    throw ConfigError(context + " must be an object");
  }
  reject_unknown_keys(object, context, {mean_key, std_key, "min", "max"});
  TruncatedNormal dist;
  dist.mean = as_number(require_key(object, context, mean_key),
                        context + "." + mean_key);
  dist.std = as_number(require_key(object, context, std_key),
                       context + "." + std_key);
  dist.min = as_number(require_key(object, context, "min"), context + ".min");
  dist.max = as_number(require_key(object, context, "max"), context + ".max");
  return dist;
}

}  // namespace

FleetArchetype parse_archetype_json(const std::string& text) {
  const json root = parse_json(text, "archetype JSON");
  if (!root.is_object()) {
    throw ConfigError("archetype JSON must be an object");
  }
  reject_unknown_keys(root, "archetype",
                      {"name", "arrival", "dwell", "energy_kwh",
                       "max_rate_kw"});
  FleetArchetype archetype;
  archetype.name = as_string(require_key(root, "archetype", "name"), "name");
  archetype.arrival_hour =
      parse_truncated(require_key(root, "archetype", "arrival"), "arrival",
                      "mean_hour", "std_hours");
  archetype.dwell_hours =
      parse_truncated(require_key(root, "archetype", "dwell"), "dwell",
                      "mean_hours", "std_hours");
  archetype.energy_kwh =
      parse_truncated(require_key(root, "archetype", "energy_kwh"),
                      "energy_kwh", "mean", "std");
  archetype.max_rate_kw = as_number(
      require_key(root, "archetype", "max_rate_kw"), "max_rate_kw");
  validate_archetype(archetype);
  return archetype;
}

FleetArchetype load_archetype_json(const std::string& path) {
  return parse_archetype_json(read_text_file(path));
}

RunConfig parse_run_config_json(const std::string& text) {
  const json root = parse_json(text, "run config JSON");
  if (!root.is_object()) {
    throw ConfigError("run config JSON must be an object");
  }
  reject_unknown_keys(
      root, "run config",
      {"horizon", "max_delay", "normalization", "capacity_groups",
       "global_capacity_kw", "sessions_csv", "archetype", "fleet_size",
       "num_samples", "rng_seed", "out_csv", "out_svg", "threads"});

  RunConfig config;
  if (const auto it = root.find("horizon"); it != root.end()) {
    if (!it->is_object()) {
      throw ConfigError("horizon must be an object");
    }
    reject_unknown_keys(*it, "horizon",
                        {"num_slots", "slot_duration_hours", "start_hour"});
    if (const auto slots = it->find("num_slots"); slots != it->end()) {
      config.horizon.num_slots = as_int(*slots, "horizon.num_slots");
    }
    if (const auto dur = it->find("slot_duration_hours"); dur != it->end()) {
      config.horizon.slot_duration_hours =
          as_number(*dur, "horizon.slot_duration_hours");
    }
    if (const auto start = it->find("start_hour"); start != it->end()) {
      config.horizon_start_hour = as_number(*start, "horizon.start_hour");
    }
  }
  if (const auto it = root.find("max_delay"); it != root.end()) {
    config.max_delay = as_int(*it, "max_delay");
  }
  if (const auto it = root.find("normalization"); it != root.end()) {
    config.normalization =
        parse_normalization(as_string(*it, "normalization"));
  }
  if (const auto it = root.find("capacity_groups"); it != root.end()) {
    if (!it->is_array()) {
      throw ConfigError("capacity_groups must be an array");
    }
    for (std::size_t g = 0; g < it->size(); ++g) {
      const json& entry = (*it)[g];
      const std::string context = "capacity_groups[" + std::to_string(g) + "]";
      if (!entry.is_object()) {
        throw ConfigError(context + " must be an object");
      }
      reject_unknown_keys(entry, context, {"members", "capacity_kw"});
      CapacityGroup group;
      const json& members = require_key(entry, context, "members");
      if (!members.is_array()) {
        throw ConfigError(context + ".members must be an array of ids");
      }
      for (const json& member : members) {
        group.member_vehicle_ids.push_back(
            as_string(member, context + ".members entry"));
      }
      group.capacity_kw = as_number(require_key(entry, context, "capacity_kw"),
                                    context + ".capacity_kw");
      config.capacity_groups.push_back(std::move(group));
    }
  }
  if (const auto it = root.find("global_capacity_kw"); it != root.end()) {
    config.global_capacity_kw = as_number(*it, "global_capacity_kw");
  }
  if (const auto it = root.find("sessions_csv"); it != root.end()) {
    config.sessions_csv = as_string(*it, "sessions_csv");
  }
  if (const auto it = root.find("archetype"); it != root.end()) {
    config.archetype_path = as_string(*it, "archetype");
  }
  if (const auto it = root.find("fleet_size"); it != root.end()) {
    config.fleet_size = as_int(*it, "fleet_size");
  }
  if (const auto it = root.find("num_samples"); it != root.end()) {
    config.num_samples = as_int(*it, "num_samples");
  }
  if (const auto it = root.find("rng_seed"); it != root.end()) {
    if (!it->is_number_integer() ||
        (it->is_number_integer() && !it->is_number_unsigned() &&
         it->get<std::int64_t>() < 0)) {
      throw ConfigError("rng_seed must be a nonnegative integer");
    }
    config.rng_seed = it->get<std::uint64_t>();
  }
  if (const auto it = root.find("out_csv"); it != root.end()) {
    config.out_csv = as_string(*it, "out_csv");
  }
  if (const auto it = root.find("out_svg"); it != root.end()) {
    config.out_svg = as_string(*it, "out_svg");
  }
  if (const auto it = root.find("threads"); it != root.end()) {
    config.threads = as_int(*it, "threads");
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config_json(read_text_file(path));
}

void validate_run_config(const RunConfig& config) {
  if (!config.horizon.valid()) {
    throw ConfigError("horizon must have num_slots >= 1 and a positive slot "
                      "duration");
  }
  if (config.max_delay < 1 || config.max_delay > config.horizon.num_slots) {
    throw ConfigError("max_delay must lie in [1, " +
                      std::to_string(config.horizon.num_slots) + "]");
  }
  const bool has_sessions = config.sessions_csv.has_value();
  const bool has_archetype = config.archetype_path.has_value();
  if (has_sessions == has_archetype) {
    throw ConfigError("exactly one input mode must be set: sessions_csv or "
                      "archetype");
  }
  if (has_archetype &&
      (!config.capacity_groups.empty() || config.global_capacity_kw)) {
    throw ConfigError("capacity constraints require the sessions input mode; "
                      "archetype sampling generates fresh vehicle ids per "
                      "sample");
  }
  if (config.fleet_size < 1) {
    throw ConfigError("fleet_size must be at least 1");
  }
  if (config.num_samples < 1) {
    throw ConfigError("num_samples must be at least 1");
  }
  if (config.threads < 0) {
    throw ConfigError("threads must be >= 0 (0 = auto)");
  }
}

Normalization parse_normalization(const std::string& text) {
  if (text == "aggregate") {
    return Normalization::kAggregate;
  }
  if (text == "per-vehicle") {
    return Normalization::kPerVehicle;
  }
  throw ConfigError("normalization must be 'aggregate' or 'per-vehicle', got '"
                    + text + "'");
}

}  // namespace flexmat
