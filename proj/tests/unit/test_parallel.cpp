#include "doctest.h"

#include <omp.h>

#include <sstream>

#include "flmob/channel.hpp"
#include "flmob/experiment.hpp"
#include "flmob/fl_engine.hpp"
#include "flmob/mobility.hpp"
#include "flmob/simulation.hpp"
#include "support/small_world.hpp"

using namespace flmob;

// Every parallel kernel must agree bit for bit with its serial reference,
// whatever the thread count.
TEST_SUITE("parallel") {

TEST_CASE("mobility step") {
  SimConfig c;
  c.num_users = 200;
  for (int threads : {1, 3, 8}) {
    omp_set_num_threads(threads);
    auto a = place_users(c);
    auto b = a;
    for (std::uint64_t r = 0; r < 10; ++r) {
      mobility::step_all(a, c, 1.0, r);
      mobility::step_all_serial(b, c, 1.0, r);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].position.x == b[i].position.x);
      CHECK(a[i].position.y == b[i].position.y);
      CHECK(a[i].heading == b[i].heading);
    }
  }
}

TEST_CASE("channel snapshot") {
  SimConfig c;
  c.num_users = 300;
  const auto users = place_users(c);
  const auto bss = channel::place_base_stations(c, channel::base_station_bandwidths(c));
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    CHECK(channel::round_snapshot(users, bss, 5, 2) == channel::round_snapshot_serial(users, bss, 5, 2));
  }
}

TEST_CASE("local training and evaluation") {
  SimConfig c;
  auto s = derive_stream(1, StreamPurpose::datagen, 0);
  const auto d = fl::generate_synthetic(c, s);
  auto ps = derive_stream(1, StreamPurpose::datagen, 1);
  const auto parts = fl::partition_noniid(d.train, 50, 2, ps);
  const std::vector<std::size_t> users = {3, 0, 17, 42, 8, 9};
  const auto global = fl::ModelParams::zeros(10, c.feature_dim);
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    const auto a = fl::train_users(global, d.train, parts, users, {}, 1, 0);
    const auto b = fl::train_users_serial(global, d.train, parts, users, {}, 1, 0);
    CHECK(a == b);
    CHECK(fl::evaluate(a[0], d.test) == fl::evaluate_serial(a[0], d.test));
  }
}

TEST_CASE("experiment cells") {
  experiment::ExperimentSpec spec;
  spec.config = testing::small_world();
  spec.policies = {scheduler::Policy::dagsa, scheduler::Policy::ub};
  spec.num_rounds = 4;
  spec.seeds = {1, 2};
  omp_set_num_threads(4);
  const auto a = experiment::run_cells(spec);
  const auto b = experiment::run_cells_serial(spec);
  std::stringstream x, y;
  experiment::write_csv(x, a);
  experiment::write_csv(y, b);
  CHECK(x.str() == y.str());
}

}
