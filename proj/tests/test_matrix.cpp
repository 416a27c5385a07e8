#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "flexmat/config.hpp"
#include "flexmat/csv.hpp"
#include "flexmat/matrix.hpp"
#include "test_support.hpp"

using namespace flexmat;
using test_support::session;

namespace {

const Horizon kFour{4, 1.0};

ConstraintSet single_reference() {
  ConstraintSet c;
  c.sessions = {session("v", 0, 3, 20, 10)};
  return c;
}

FleetArchetype tiny_archetype() {
  FleetArchetype a;
  a.name = "tiny";
  a.arrival_hour = {13.0, 1.0, 12.5, 16.0};
  a.dwell_hours = {4.0, 1.0, 2.0, 5.5};
  a.energy_kwh = {20.0, 5.0, 5.0, 35.0};
  a.max_rate_kw = 11.0;
  return a;
}

}  // namespace

TEST_CASE("reduction potential matches the reference windows") {
  const ConstraintSet c = single_reference();
  CHECK(std::abs(reduction_potential(c, kFour, Window{0, 1}) - 10.0) <= 1e-9);
  CHECK(std::abs(reduction_potential(c, kFour, Window{0, 3}) - 10.0 / 3.0) <=
        1e-9);
  CHECK(std::abs(reduction_potential(c, kFour, Window{2, 1})) <= 1e-9);

  ConstraintSet inflexible;
  inflexible.sessions = {session("v", 0, 1, 20, 10)};
  const Horizon h{2, 1.0};
  CHECK(std::abs(reduction_potential(inflexible, h, Window{0, 1})) <= 1e-9);
  CHECK(std::abs(reduction_potential(inflexible, h, Window{1, 1})) <= 1e-9);
  CHECK(std::abs(reduction_potential(inflexible, h, Window{0, 2})) <= 1e-9);
}

TEST_CASE("reference matrix column is frozen against the enumeration oracle") {
  const ConstraintSet c = single_reference();
  const ReductionPotentialMatrix m = build_matrix(c, kFour, 3);

  // Frozen expectations, derived by min_load_oracle before being written
  // down: column t=0 is [10, 10, 10/3].
  CHECK(std::abs(m.at(1, 0) - 10.0) <= 1e-9);
  CHECK(std::abs(m.at(2, 0) - 10.0) <= 1e-9);
  CHECK(std::abs(m.at(3, 0) - 10.0 / 3.0) <= 1e-9);

  const LoadProfile u = uncoordinated_profile(c.sessions, kFour);
  for (int k = 1; k <= 3; ++k) {
    const Window w{0, k};
    const double oracle =
        min_load_oracle(c, kFour, w, 60).in_window_energy_kwh;
    double u_sum = 0.0;
    for (int tau = 0; tau < k; ++tau) u_sum += u.aggregate[tau];
    const double live = (u_sum - oracle / kFour.slot_duration_hours) / k;
    CHECK(std::abs(m.at(k, 0) - live) <= 1e-9);
  }
}

TEST_CASE("matrix masks exactly the windows that overrun the horizon") {
  const ReductionPotentialMatrix m = build_matrix(single_reference(), kFour, 4);
  REQUIRE(m.rows() == 4);
  REQUIRE(m.cols() == 4);
  for (int k = 1; k <= 4; ++k) {
    for (int t = 0; t < 4; ++t) {
      if (t + k <= 4) {
        CHECK(m.valid(k, t));
        CHECK(std::isfinite(m.at(k, t)));
      } else {
        CHECK_FALSE(m.valid(k, t));
        CHECK(std::isnan(m.at(k, t)));
      }
    }
  }
  CHECK(m.any_valid());
  CHECK(m.max_valid_value() == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("max_valid_value ignores masked cells and clamps at zero") {
  ReductionPotentialMatrix m;
  m.horizon = Horizon{2, 1.0};
  m.max_delay_slots = 1;
  m.values = {-3.0, std::nan("")};
  m.valid_mask = {1, 0};
  CHECK(m.any_valid());
  CHECK(m.max_valid_value() == 0.0);
  m.valid_mask = {0, 0};
  CHECK_FALSE(m.any_valid());
}

TEST_CASE("inflexible fleets yield the zero matrix") {
  std::mt19937_64 engine(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Horizon h{test_support::uniform_int(engine, 4, 8), 0.5};
    ConstraintSet c;
    const int n = test_support::uniform_int(engine, 1, 5);
    for (int i = 0; i < n; ++i) {
      const int a = test_support::uniform_int(engine, 0, h.num_slots - 1);
      const int d = test_support::uniform_int(engine, a, h.num_slots - 1);
      const double r = 1.0 + 20.0 * test_support::uniform01(engine);
      c.sessions.push_back(session("v" + std::to_string(i), a, d,
                                   r * h.slot_duration_hours * (d - a + 1), r));
    }
    const ReductionPotentialMatrix m = build_matrix(c, h, h.num_slots);
    for (int k = 1; k <= m.rows(); ++k) {
      for (int t = 0; t < m.cols(); ++t) {
        if (m.valid(k, t)) CHECK(std::abs(m.at(k, t)) <= 1e-9);
      }
    }
    CHECK_FALSE(m.has_negative_cells);
  }
}

TEST_CASE("first row is strictly positive at arrival slots given slack") {
  ConstraintSet c;
  c.sessions = {session("v1", 0, 2, 8, 10), session("v2", 1, 3, 5, 10)};
  const ReductionPotentialMatrix m = build_matrix(c, kFour, 1);
  CHECK(m.at(1, 0) > 0.0);
  CHECK(m.at(1, 1) > 0.0);
}

TEST_CASE("cells are bounded by the windowed uncoordinated average") {
  std::mt19937_64 engine(29);
  const Horizon h{6, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    ConstraintSet c;
    const int n = test_support::uniform_int(engine, 1, 4);
    for (int i = 0; i < n; ++i) {
      const int a = test_support::uniform_int(engine, 0, h.num_slots - 1);
      const int d = test_support::uniform_int(engine, a, h.num_slots - 1);
      const double r = 1.0 + 10.0 * test_support::uniform01(engine);
      const double cap = r * (d - a + 1);
      c.sessions.push_back(session("v" + std::to_string(i), a, d,
                                   cap * test_support::uniform01(engine), r));
    }
    const LoadProfile u = uncoordinated_profile(c.sessions, h);
    const ReductionPotentialMatrix m = build_matrix(c, h, h.num_slots);
    for (int k = 1; k <= m.rows(); ++k) {
      for (int t = 0; t < m.cols(); ++t) {
        if (!m.valid(k, t)) continue;
        CHECK(m.at(k, t) >= -1e-9);
        double u_avg = 0.0;
        for (int tau = t; tau < t + k; ++tau) u_avg += u.aggregate[tau];
        CHECK(m.at(k, t) <= u_avg / k + 1e-9);
      }
    }
  }
}

TEST_CASE("windows touching no dwell have zero reduction potential") {
  ConstraintSet c;
  c.sessions = {session("v", 0, 1, 5, 10)};
  const Horizon h{5, 1.0};
  const ReductionPotentialMatrix m = build_matrix(c, h, 1);
  CHECK(m.at(1, 2) == 0.0);
  CHECK(m.at(1, 3) == 0.0);
  CHECK(m.at(1, 4) == 0.0);
}

TEST_CASE("matrices add over disjoint uncoupled fleets") {
  std::mt19937_64 engine(31);
  const Horizon h{6, 1.0};
  auto draw = [&](const std::string& prefix) {
    ConstraintSet c;
    for (int i = 0; i < 3; ++i) {
      const int a = test_support::uniform_int(engine, 0, 5);
      const int d = test_support::uniform_int(engine, a, 5);
      const double r = 1.0 + 10.0 * test_support::uniform01(engine);
      const double cap = r * (d - a + 1);
      c.sessions.push_back(session(prefix + std::to_string(i), a, d,
                                   cap * test_support::uniform01(engine), r));
    }
    return c;
  };
  const ConstraintSet a = draw("a");
  const ConstraintSet b = draw("b");
  ConstraintSet both = a;
  both.sessions.insert(both.sessions.end(), b.sessions.begin(),
                       b.sessions.end());
  const ReductionPotentialMatrix ma = build_matrix(a, h, 6);
  const ReductionPotentialMatrix mb = build_matrix(b, h, 6);
  const ReductionPotentialMatrix mc = build_matrix(both, h, 6);
  for (int k = 1; k <= 6; ++k) {
    for (int t = 0; t < 6; ++t) {
      if (!mc.valid(k, t)) continue;
      CHECK(std::abs(mc.at(k, t) - (ma.at(k, t) + mb.at(k, t))) <= 1e-6);
    }
  }
}

TEST_CASE("binding capacity can push cells negative and sets the flag") {
  ConstraintSet c;
  c.sessions = {session("v1", 0, 1, 10, 10), session("v2", 0, 1, 10, 10)};
  c.capacity_groups = {{{"v1", "v2"}, 10.0}};
  const Horizon h{2, 1.0};
  const ReductionPotentialMatrix m = build_matrix(c, h, 2);
  // Uncoordinated charging front-loads 20 kW into slot 0; the cap forces a
  // 10 kW slot-1 floor the baseline never has.
  CHECK(std::abs(m.at(1, 0) - 10.0) <= 1e-9);
  CHECK(std::abs(m.at(1, 1) - -10.0) <= 1e-9);
  CHECK(std::abs(m.at(2, 0) - 0.0) <= 1e-9);
  CHECK(m.has_negative_cells);
}

TEST_CASE("build_matrix output is thread-count invariant") {
  ConstraintSet c;
  c.sessions = {session("v1", 0, 4, 30, 10), session("v2", 2, 5, 18, 9),
                session("v3", 1, 3, 8, 7)};
  c.capacity_groups = {{{"v1", "v2"}, 14.0}};
  const Horizon h{6, 1.0};
  const ReductionPotentialMatrix sequential = build_matrix(c, h, 6, 0.001, 1);
  const ReductionPotentialMatrix parallel = build_matrix(c, h, 6, 0.001, 4);
  REQUIRE(sequential.values.size() == parallel.values.size());
  for (std::size_t i = 0; i < sequential.values.size(); ++i) {
    if (sequential.valid_mask[i]) {
      CHECK(sequential.values[i] == parallel.values[i]);
    }
  }
  CHECK(sequential.valid_mask == parallel.valid_mask);
}

TEST_CASE("build_matrix refuses an empty fleet") {
  ConstraintSet none;
  CHECK_THROWS_AS(build_matrix(none, kFour, 2), EmptyFleetError);
}

TEST_CASE("monte carlo with one sample reduces to build_matrix") {
  const FleetArchetype a = tiny_archetype();
  const Horizon h{10, 1.0};
  MonteCarloSpec spec;
  spec.fleet_size = 5;
  spec.num_samples = 1;
  spec.rng_seed = 99;
  const ReductionPotentialMatrix mc = monte_carlo_matrix(
      a, spec, h, 4, Normalization::kAggregate, 12.0, 1);

  const auto fleet =
      sample_fleet(a, 5, h, monte_carlo_sample_seed(99, 0), 12.0);
  ConstraintSet c;
  c.sessions = fleet;
  const ReductionPotentialMatrix direct = build_matrix(c, h, 4);
  REQUIRE(mc.values.size() == direct.values.size());
  for (std::size_t i = 0; i < mc.values.size(); ++i) {
    if (direct.valid_mask[i]) CHECK(mc.values[i] == direct.values[i]);
  }
}

TEST_CASE("monte carlo averaging matches the per-sample mean") {
  const FleetArchetype a = tiny_archetype();
  const Horizon h{10, 1.0};
  MonteCarloSpec spec;
  spec.fleet_size = 4;
  spec.num_samples = 3;
  spec.rng_seed = 5;
  const ReductionPotentialMatrix mc = monte_carlo_matrix(
      a, spec, h, 4, Normalization::kAggregate, 12.0, 2);

  std::vector<ReductionPotentialMatrix> singles;
  for (int j = 0; j < 3; ++j) {
    ConstraintSet c;
    c.sessions = sample_fleet(a, 4, h, monte_carlo_sample_seed(5, j), 12.0);
    singles.push_back(build_matrix(c, h, 4));
  }
  for (std::size_t i = 0; i < mc.values.size(); ++i) {
    if (!mc.valid_mask[i]) continue;
    const double mean =
        (singles[0].values[i] + singles[1].values[i] + singles[2].values[i]) /
        3.0;
    const double scale = std::max(1.0, std::abs(mean));
    CHECK(std::abs(mc.values[i] - mean) / scale <= 1e-9);
  }
}

TEST_CASE("per-vehicle normalization divides the aggregate average by N") {
  const FleetArchetype a = tiny_archetype();
  const Horizon h{10, 1.0};
  MonteCarloSpec spec;
  spec.fleet_size = 7;
  spec.num_samples = 4;
  spec.rng_seed = 21;
  const ReductionPotentialMatrix agg = monte_carlo_matrix(
      a, spec, h, 5, Normalization::kAggregate, 12.0, 1);
  const ReductionPotentialMatrix pv = monte_carlo_matrix(
      a, spec, h, 5, Normalization::kPerVehicle, 12.0, 1);
  CHECK(pv.normalization == Normalization::kPerVehicle);
  CHECK(pv.num_vehicles == 7);
  for (std::size_t i = 0; i < agg.values.size(); ++i) {
    if (!agg.valid_mask[i]) continue;
    const double want = agg.values[i] / 7.0;
    const double scale = std::max(1.0, std::abs(want));
    CHECK(std::abs(pv.values[i] - want) / scale <= 1e-12);
  }
}

TEST_CASE("monte carlo output is bit-reproducible across runs and threads") {
  const FleetArchetype a = tiny_archetype();
  const Horizon h{12, 1.0};
  MonteCarloSpec spec;
  spec.fleet_size = 6;
  spec.num_samples = 8;
  spec.rng_seed = 777;
  const ReductionPotentialMatrix first = monte_carlo_matrix(
      a, spec, h, 6, Normalization::kPerVehicle, 12.0, 1);
  const ReductionPotentialMatrix again = monte_carlo_matrix(
      a, spec, h, 6, Normalization::kPerVehicle, 12.0, 1);
  const ReductionPotentialMatrix threaded = monte_carlo_matrix(
      a, spec, h, 6, Normalization::kPerVehicle, 12.0, 4);
  for (std::size_t i = 0; i < first.values.size(); ++i) {
    if (!first.valid_mask[i]) continue;
    CHECK(first.values[i] == again.values[i]);
    CHECK(first.values[i] == threaded.values[i]);
  }
  MonteCarloSpec other = spec;
  other.rng_seed = 778;
  const ReductionPotentialMatrix different = monte_carlo_matrix(
      a, other, h, 6, Normalization::kPerVehicle, 12.0, 1);
  bool any_changed = false;
  for (std::size_t i = 0; i < first.values.size(); ++i) {
    if (first.valid_mask[i] && first.values[i] != different.values[i]) {
      any_changed = true;
    }
  }
  CHECK(any_changed);
}

TEST_CASE("sample seeds form a reproducible stream") {
  CHECK(monte_carlo_sample_seed(1, 0) == monte_carlo_sample_seed(1, 0));
  CHECK(monte_carlo_sample_seed(1, 0) != monte_carlo_sample_seed(1, 1));
  CHECK(monte_carlo_sample_seed(1, 0) != monte_carlo_sample_seed(2, 0));
}
