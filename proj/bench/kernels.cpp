// Serial reference vs OpenMP kernel, one pair per kernel. The Arg is the
// problem size (users, or test samples for evaluate). Wall time is what
// matters for the OpenMP variants, so every case reports real time.

#include <benchmark/benchmark.h>

#include "flmob/channel.hpp"
#include "flmob/fl_engine.hpp"
#include "flmob/mobility.hpp"
#include "flmob/simulation.hpp"

using namespace flmob;

namespace {

SimConfig sized(std::int64_t users) {
  SimConfig c;
  c.num_users = static_cast<std::size_t>(users);
  c.num_bs = 4;
  return c;
}

template <auto Step>
void step_kernel(benchmark::State& state) {
  const auto c = sized(state.range(0));
  auto users = place_users(c);
  std::uint64_t round = 0;
  for (auto _ : state) {
    Step(users, c, c.mobility_period_s, ++round);
    benchmark::DoNotOptimize(users.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Snapshot>
void snapshot_kernel(benchmark::State& state) {
  const auto c = sized(state.range(0));
  const auto users = place_users(c);
  const auto bw = channel::base_station_bandwidths(c);
  const auto bss = channel::place_base_stations(c, bw);
  std::uint64_t round = 0;
  for (auto _ : state) {
    auto snap = Snapshot(users, bss, c.master_seed, ++round);
    benchmark::DoNotOptimize(snap);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct Learning {
  SimConfig config;
  fl::SyntheticData data;
  std::vector<fl::IndexSet> partitions;
  fl::ModelParams model;

  explicit Learning(std::size_t users) {
    config.num_users = users;
    config.train_samples = 300 * users;
    auto gen = derive_stream(1, StreamPurpose::datagen, 0);
    data = fl::generate_synthetic(config, gen);
    auto part = derive_stream(1, StreamPurpose::shuffle, 0);
    partitions = fl::partition_noniid(data.train, users, config.shards_per_user, part);
    model = fl::ModelParams::zeros(fl::kNumClasses, data.train.dim);
  }
};

template <auto Train>
void train_kernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Learning l(n);
  std::vector<std::size_t> users(n);
  for (std::size_t i = 0; i < n; ++i) users[i] = i;
  const fl::TrainOptions opt{l.config.local_epochs, l.config.learning_rate, l.config.batch_size};
  std::uint64_t round = 0;
  for (auto _ : state) {
    auto out = Train(l.model, l.data.train, l.partitions, users, opt, 1, ++round);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Evaluate>
void evaluate_kernel(benchmark::State& state) {
  SimConfig c;
  c.test_samples = static_cast<std::size_t>(state.range(0));
  auto gen = derive_stream(1, StreamPurpose::datagen, 0);
  const auto data = fl::generate_synthetic(c, gen);
  auto m = fl::ModelParams::zeros(fl::kNumClasses, data.test.dim);
  auto s = derive_stream(2, StreamPurpose::compute, 0);
  for (double& w : m.weights) w = s.normal();
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(m, data.test));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(step_kernel<mobility::step_all_serial>)->Name("step_all/serial")->Arg(1000)->Arg(100000)->UseRealTime();
BENCHMARK(step_kernel<mobility::step_all>)->Name("step_all/omp")->Arg(1000)->Arg(100000)->UseRealTime();
BENCHMARK(snapshot_kernel<channel::round_snapshot_serial>)->Name("round_snapshot/serial")->Arg(1000)->Arg(100000)->UseRealTime();
BENCHMARK(snapshot_kernel<channel::round_snapshot>)->Name("round_snapshot/omp")->Arg(1000)->Arg(100000)->UseRealTime();
BENCHMARK(train_kernel<fl::train_users_serial>)->Name("train_users/serial")->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(train_kernel<fl::train_users>)->Name("train_users/omp")->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(evaluate_kernel<fl::evaluate_serial>)->Name("evaluate/serial")->Arg(2000)->Arg(50000)->UseRealTime();
BENCHMARK(evaluate_kernel<fl::evaluate>)->Name("evaluate/omp")->Arg(2000)->Arg(50000)->UseRealTime();

BENCHMARK_MAIN();
