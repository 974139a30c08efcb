#include "doctest.h"

#include <cmath>

#include "flmob/bandwidth.hpp"
#include "flmob/channel.hpp"
#include "flmob/simulation.hpp"
#include "support/small_world.hpp"

using namespace flmob;
using scheduler::Policy;

TEST_SUITE("simulation") {

TEST_CASE("single user, single BS") {
  auto c = testing::small_world(1, 1);
  c.rho2 = 1.0;
  Simulation sim(c);
  const auto rec = sim.run_round(Policy::dagsa);
  REQUIRE(rec.schedule.num_selected() == 1);
  const auto se = channel::spectral_efficiencies(sim.last_snapshot(), sim.config());
  const double comp = draw_comp_latencies(sim.config(), 0)[0];
  const double closed = comp + c.model_size_bits / (1e6 * se(0, 0));
  CHECK(std::abs(rec.schedule.round_latency - closed) < 1e-8);
  CHECK(rec.cumulative_time_s == rec.schedule.round_latency);
  CHECK(sim.global_model() != fl::ModelParams::zeros(10, c.feature_dim));
  CHECK(rec.participation_counts == std::vector<std::size_t>{1});
}

TEST_CASE("same seed, same records") {
  const auto c = testing::small_world();
  for (auto p : scheduler::all_policies()) {
    Simulation a(c), b(c);
    for (int r = 0; r < 5; ++r) {
      const auto x = a.run_round(p);
      const auto y = b.run_round(p);
      CHECK(x.schedule == y.schedule);
      CHECK(x.accuracy == y.accuracy);
      CHECK(x.cumulative_time_s == y.cumulative_time_s);
      CHECK(x.participation_counts == y.participation_counts);
    }
    CHECK(a.global_model() == b.global_model());
  }
}

TEST_CASE("static users keep their distances while fading changes") {
  auto c = testing::small_world();
  c.speed_mps = 0.0;
  Simulation sim(c);
  sim.run_round(Policy::dagsa);
  const auto first = sim.last_snapshot();
  for (int r = 0; r < 3; ++r) {
    sim.run_round(Policy::dagsa);
    CHECK(sim.last_snapshot().distances == first.distances);
    CHECK(sim.last_snapshot().gains != first.gains);
  }
}

TEST_CASE("moving users change their distances") {
  const auto c = testing::small_world();
  Simulation sim(c);
  sim.run_round(Policy::sa);
  const auto first = sim.last_snapshot().distances;
  sim.run_round(Policy::sa);
  CHECK(sim.last_snapshot().distances != first);
}

TEST_CASE("round invariants hold over a run") {
  auto c = testing::small_world(12, 3);
  c.rho1 = 0.3;
  Simulation sim(c);
  double prev = 0.0;
  for (std::size_t r = 0; r < 15; ++r) {
    const auto rec = sim.run_round(Policy::dagsa);
    CHECK(rec.round_index == r);
    CHECK(rec.cumulative_time_s >= prev);
    prev = rec.cumulative_time_s;
    for (auto n : rec.participation_counts) CHECK(n <= r + 1);
    for (const auto& u : sim.users()) {
      CHECK(u.position.x >= 0.0);
      CHECK(u.position.x <= c.area_side_m);
      CHECK(u.position.y >= 0.0);
      CHECK(u.position.y <= c.area_side_m);
    }
    CHECK(rec.accuracy >= 0.0);
    CHECK(rec.accuracy <= 1.0);
  }
  CHECK(sim.round_index() == 15);
}

TEST_CASE("compute latency modes") {
  auto c = testing::small_world();
  const auto r0 = draw_comp_latencies(c, 0);
  const auto r1 = draw_comp_latencies(c, 1);
  CHECK(r0 != r1);
  for (double t : r0) {
    CHECK(t >= 0.10);
    CHECK(t < 0.11);
  }
  c.comp_latency_mode = CompLatencyMode::fixed_per_user;
  CHECK(draw_comp_latencies(c, 0) == draw_comp_latencies(c, 7));
}

TEST_CASE("realized-latency movement follows the previous round") {
  auto c = testing::small_world();
  c.mobility_dt_mode = MobilityDtMode::realized_previous_round;
  c.speed_mps = 1e-3;  // millimetres: no wall is within reach
  Simulation sim(c);
  const auto start = sim.users();
  sim.run_round(Policy::sa);  // round 0 moves for the nominal period
  const auto after0 = sim.users();
  for (std::size_t i = 0; i < start.size(); ++i) {
    CHECK(distance(start[i].position, after0[i].position) == doctest::Approx(1e-3).epsilon(1e-6));
  }
  const double latency0 = sim.cumulative_time();
  sim.run_round(Policy::sa);
  for (std::size_t i = 0; i < start.size(); ++i) {
    CHECK(distance(after0[i].position, sim.users()[i].position) ==
          doctest::Approx(1e-3 * latency0).epsilon(1e-6));
  }
}

TEST_CASE("resolved configs carry explicit bandwidths") {
  auto c = testing::small_world(10, 4);
  c.heterogeneous_bandwidth = true;
  const auto r = resolve_config(c);
  CHECK_FALSE(r.heterogeneous_bandwidth);
  REQUIRE(r.bs_bandwidth_mhz.size() == 4);
  double total = 0.0;
  for (double b : r.bs_bandwidth_mhz) total += b;
  CHECK(total == doctest::Approx(4.0));
  CHECK(resolve_config(r).bs_bandwidth_mhz == r.bs_bandwidth_mhz);
}

TEST_CASE("full participation on IID data learns the task") {
  SimConfig c;
  c.rho2 = 1.0;
  SimulationOptions o;
  o.partition = PartitionMode::iid;
  Simulation sim(c, o);
  RoundRecord rec;
  for (int r = 0; r < 30; ++r) rec = sim.run_round(Policy::dagsa);
  MESSAGE("IID full-participation accuracy after 30 rounds: " << rec.accuracy);
  CHECK(rec.schedule.num_selected() == 50);
  CHECK(rec.accuracy > 0.85);
}

TEST_CASE("external datasets replace the synthetic ones") {
  const auto c = testing::small_world(4, 1);
  fl::Dataset train, test;
  train.dim = test.dim = 2;
  for (int i = 0; i < 40; ++i) {
    const int y = i % 10;
    train.features.push_back(y);
    train.features.push_back(-y);
    train.labels.push_back(y);
  }
  test = train;
  SimulationOptions o;
  o.train = train;
  o.test = test;
  Simulation sim(c, o);
  CHECK(sim.global_model().dim == 2);
  CHECK(sim.initial_accuracy() == 0.1);
  sim.run_round(Policy::sa);
  CHECK(sim.partitions().size() == 4);
}

}
