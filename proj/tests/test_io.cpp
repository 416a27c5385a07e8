#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "flexmat/config.hpp"
#include "flexmat/csv.hpp"
#include "flexmat/svg.hpp"
#include "test_support.hpp"

using namespace flexmat;
using test_support::session;

namespace {

ReductionPotentialMatrix tiny_matrix() {
  ReductionPotentialMatrix m;
  m.horizon = Horizon{2, 1.0};
  m.max_delay_slots = 2;
  m.values = {1.5, 0.0, 2.25, std::nan("")};
  m.valid_mask = {1, 1, 1, 0};
  m.num_vehicles = 1;
  return m;
}

}  // namespace

TEST_CASE("sessions CSV round-trips exact values") {
  std::vector<ChargeSession> fleet{
      session("truck-1", 0, 47, 0.1, 50.0),
      session("bus_2", 12, 30, 219.99999999999997, 150.0),
      session("v", 3, 3, 1e-3, 7.25),
  };
  const std::string text = sessions_to_csv(fleet);
  const auto parsed = parse_sessions_csv(text);
  REQUIRE(parsed.size() == fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    CHECK(parsed[i].vehicle_id == fleet[i].vehicle_id);
    CHECK(parsed[i].arrival_slot == fleet[i].arrival_slot);
    CHECK(parsed[i].departure_slot == fleet[i].departure_slot);
    CHECK(parsed[i].energy_kwh == fleet[i].energy_kwh);
    CHECK(parsed[i].max_rate_kw == fleet[i].max_rate_kw);
  }
  CHECK(text.find("\r") == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("sessions CSV parser names the offending row") {
  const std::string header =
      "vehicle_id,arrival_slot,departure_slot,energy_kwh,max_rate_kw\n";

  SUBCASE("wrong header") {
    CHECK_THROWS_WITH_AS(parse_sessions_csv("id,a,d,e,r\nv,0,1,1,1\n"),
                         doctest::Contains("header"), ConfigError);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(parse_sessions_csv(""), ConfigError);
  }
  SUBCASE("non-integer slot") {
    CHECK_THROWS_WITH_AS(parse_sessions_csv(header + "v,1.5,2,1,1\n"),
                         doctest::Contains("row 2"), ConfigError);
  }
  SUBCASE("non-numeric energy on a later row") {
    CHECK_THROWS_WITH_AS(
        parse_sessions_csv(header + "v,0,1,1,1\nw,0,1,abc,1\n"),
        doctest::Contains("row 3"), ConfigError);
  }
  SUBCASE("missing field") {
    CHECK_THROWS_WITH_AS(parse_sessions_csv(header + "v,0,1,1\n"),
                         doctest::Contains("expected 5 fields"), ConfigError);
  }
  SUBCASE("empty vehicle id") {
    CHECK_THROWS_WITH_AS(parse_sessions_csv(header + ",0,1,1,1\n"),
                         doctest::Contains("vehicle_id"), ConfigError);
  }
  SUBCASE("delimiter characters in an id refuse to serialize") {
    CHECK_THROWS_AS(sessions_to_csv({session("a,b", 0, 1, 1, 1)}), ConfigError);
  }
}

TEST_CASE("sessions CSV tolerates CRLF input") {
  const std::string text =
      "vehicle_id,arrival_slot,departure_slot,energy_kwh,max_rate_kw\r\n"
      "v,0,1,1.5,10\r\n";
  const auto parsed = parse_sessions_csv(text);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].energy_kwh == 1.5);
}

TEST_CASE("matrix CSV bytes follow the documented format") {
  const std::string text = matrix_to_csv(tiny_matrix());
  CHECK(text ==
        "k\\t,0,1\n"
        "1,1.500000,0.000000\n"
        "2,2.250000,\n");
}

TEST_CASE("matrix CSV round-trips values and mask at format precision") {
  ReductionPotentialMatrix m = tiny_matrix();
  m.values[0] = 1.2345678;  // rounds to 1.234568 in the file
  const ReductionPotentialMatrix back = parse_matrix_csv(matrix_to_csv(m));
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  CHECK(back.valid_mask == m.valid_mask);
  for (int k = 1; k <= m.rows(); ++k) {
    for (int t = 0; t < m.cols(); ++t) {
      if (!m.valid(k, t)) {
        CHECK(std::isnan(back.at(k, t)));
        continue;
      }
      CHECK(std::abs(back.at(k, t) - m.at(k, t)) <= 1e-6);
    }
  }
}

TEST_CASE("matrix CSV parser rejects malformed input") {
  SUBCASE("wrong corner cell") {
    CHECK_THROWS_WITH_AS(parse_matrix_csv("kt,0\n1,1.0\n"),
                         doctest::Contains("k\\t"), ConfigError);
  }
  SUBCASE("non-consecutive column labels") {
    CHECK_THROWS_AS(parse_matrix_csv("k\\t,0,2\n1,1.0,1.0\n"), ConfigError);
  }
  SUBCASE("wrong window length label") {
    CHECK_THROWS_WITH_AS(parse_matrix_csv("k\\t,0\n2,1.0\n"),
                         doctest::Contains("row 2"), ConfigError);
  }
  SUBCASE("short row") {
    CHECK_THROWS_WITH_AS(parse_matrix_csv("k\\t,0,1\n1,1.0\n"),
                         doctest::Contains("row 2"), ConfigError);
  }
  SUBCASE("no data rows") {
    CHECK_THROWS_AS(parse_matrix_csv("k\\t,0,1\n"), ConfigError);
  }
}

TEST_CASE("text file helpers report I/O failures") {
  const auto dir = test_support::scratch_dir("io_text");
  const std::string path = (dir / "out.txt").string();
  write_text_file(path, "payload");
  CHECK(read_text_file(path) == "payload");
  CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), IoError);
  CHECK_THROWS_AS(write_text_file((dir / "no" / "such" / "dir.txt").string(),
                                  "x"),
                  IoError);
}

TEST_CASE("archetype JSON parses the documented schema") {
  const std::string text = R"({
    "name": "freight",
    "arrival": {"mean_hour": 18.0, "std_hours": 1.5, "min": 13.0, "max": 23.0},
    "dwell": {"mean_hours": 13.0, "std_hours": 2.0, "min": 6.0, "max": 18.0},
    "energy_kwh": {"mean": 45.0, "std": 15.0, "min": 10.0, "max": 90.0},
    "max_rate_kw": 50.0
  })";
  const FleetArchetype a = parse_archetype_json(text);
  CHECK(a.name == "freight");
  CHECK(a.arrival_hour.mean == 18.0);
  CHECK(a.arrival_hour.std == 1.5);
  CHECK(a.arrival_hour.min == 13.0);
  CHECK(a.arrival_hour.max == 23.0);
  CHECK(a.dwell_hours.mean == 13.0);
  CHECK(a.energy_kwh.std == 15.0);
  CHECK(a.max_rate_kw == 50.0);
}

TEST_CASE("archetype JSON rejects unknown keys and malformed documents") {
  CHECK_THROWS_AS(parse_archetype_json("{"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_archetype_json(R"({"name": "x", "max_rate_kw": 1,
        "arrival": {"mean_hour": 18, "std_hours": 1, "min": 13, "max": 23},
        "dwell": {"mean_hours": 13, "std_hours": 2, "min": 6, "max": 18},
        "energy_kwh": {"mean": 45, "std": 15, "min": 10, "max": 90},
        "surprise": true})"),
      doctest::Contains("surprise"), ConfigError);
  CHECK_THROWS_AS(parse_archetype_json(R"({"name": "x"})"), ConfigError);
}

TEST_CASE("shipped archetype configs parse and validate") {
  const std::string dir = FLEXMAT_CONFIGS_DIR;
  const FleetArchetype freight = load_archetype_json(dir + "/freight.json");
  CHECK(freight.name == "freight");
  CHECK_NOTHROW(validate_archetype(freight));
  const FleetArchetype transit = load_archetype_json(dir + "/transit.json");
  CHECK(transit.name == "transit");
  CHECK(transit.max_rate_kw > freight.max_rate_kw);
  CHECK_NOTHROW(validate_archetype(transit));
}

TEST_CASE("run config JSON parses and validates") {
  const std::string text = R"({
    "horizon": {"num_slots": 24, "slot_duration_hours": 0.5, "start_hour": 6.0},
    "max_delay": 4,
    "normalization": "per-vehicle",
    "sessions_csv": "fleet.csv",
    "capacity_groups": [{"members": ["a", "b"], "capacity_kw": 11.0}],
    "global_capacity_kw": 40.0,
    "out_csv": "m.csv",
    "threads": 2
  })";
  const RunConfig config = parse_run_config_json(text);
  CHECK(config.horizon.num_slots == 24);
  CHECK(config.horizon.slot_duration_hours == 0.5);
  CHECK(config.horizon_start_hour == 6.0);
  CHECK(config.max_delay == 4);
  CHECK(config.normalization == Normalization::kPerVehicle);
  REQUIRE(config.sessions_csv.has_value());
  CHECK(*config.sessions_csv == "fleet.csv");
  REQUIRE(config.capacity_groups.size() == 1);
  CHECK(config.capacity_groups[0].capacity_kw == 11.0);
  CHECK(config.global_capacity_kw == 40.0);
  CHECK(config.threads == 2);
  CHECK_NOTHROW(validate_run_config(config));
}

TEST_CASE("run config cross-field validation") {
  RunConfig config;
  config.sessions_csv = "fleet.csv";
  CHECK_NOTHROW(validate_run_config(config));

  SUBCASE("both input modes") {
    config.archetype_path = "a.json";
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
  }
  SUBCASE("neither input mode") {
    config.sessions_csv.reset();
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
  }
  SUBCASE("capacity groups require the sessions mode") {
    config.sessions_csv.reset();
    config.archetype_path = "a.json";
    config.capacity_groups = {{{"a"}, 5.0}};
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
  }
  SUBCASE("max_delay must fit the horizon") {
    config.max_delay = 0;
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
    config.max_delay = config.horizon.num_slots + 1;
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
  }
  SUBCASE("counts and threads must be sane") {
    config.fleet_size = 0;
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
    config.fleet_size = 1;
    config.num_samples = 0;
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
    config.num_samples = 1;
    config.threads = -1;
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
  }
}

TEST_CASE("run config JSON rejects unknown keys") {
  CHECK_THROWS_WITH_AS(parse_run_config_json(R"({"sessions_csv": "f.csv",
                                                 "max_dealy": 3})"),
                       doctest::Contains("max_dealy"), ConfigError);
}

TEST_CASE("normalization names") {
  CHECK(parse_normalization("aggregate") == Normalization::kAggregate);
  CHECK(parse_normalization("per-vehicle") == Normalization::kPerVehicle);
  CHECK_THROWS_AS(parse_normalization("per_vehicle"), ConfigError);
  CHECK(std::string(to_string(Normalization::kAggregate)) == "aggregate");
  CHECK(std::string(to_string(Normalization::kPerVehicle)) == "per-vehicle");
}

TEST_CASE("heatmap rendering is deterministic") {
  const ReductionPotentialMatrix m = tiny_matrix();
  const std::string first = render_heatmap_svg(m, 12.0);
  const std::string again = render_heatmap_svg(m, 12.0);
  CHECK(first == again);
  CHECK(first.find("<svg") != std::string::npos);
  CHECK(first.find("</svg>") != std::string::npos);
}

TEST_CASE("heatmap paints the maximum cell darkest") {
  ReductionPotentialMatrix m = tiny_matrix();
  m.values = {0.0, 0.0, 5.0, std::nan("")};
  const std::string svg = render_heatmap_svg(m, 12.0);
  // Dark ramp endpoint on the max cell, white on the zeros.
  CHECK(svg.find("#08306b") != std::string::npos);
  CHECK(svg.find("#ffffff") != std::string::npos);
}

TEST_CASE("all-zero matrices render against a degenerate scale") {
  ReductionPotentialMatrix m = tiny_matrix();
  m.values = {0.0, 0.0, 0.0, std::nan("")};
  const std::string svg = render_heatmap_svg(m, 12.0);
  // Every valid cell sits at the white end of the ramp; nothing divides by
  // the (zero) matrix maximum.
  CHECK(svg.find("fill=\"#ffffff\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("heatmap refuses matrices with no valid cells") {
  ReductionPotentialMatrix m = tiny_matrix();
  m.valid_mask = {0, 0, 0, 0};
  CHECK_THROWS_AS(render_heatmap_svg(m, 12.0), AllMaskedError);
}

TEST_CASE("heatmap labels columns with clock hours") {
  ReductionPotentialMatrix m = tiny_matrix();
  const std::string svg = render_heatmap_svg(m, 12.0);
  CHECK(svg.find(">12<") != std::string::npos);  // start-hour column label
}
