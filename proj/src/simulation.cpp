#include "flmob/simulation.hpp"

#include <numbers>

#include "flmob/channel.hpp"
#include "flmob/mobility.hpp"

namespace flmob {

SimConfig resolve_config(SimConfig config) {
  config.validate();
  config.bs_bandwidth_mhz = channel::base_station_bandwidths(config);
  config.heterogeneous_bandwidth = false;
  return config;
}

std::vector<UserState> place_users(const SimConfig& config) {
  RandomStream stream = derive_stream(config.master_seed, StreamPurpose::placement, 0, 2);
  std::vector<UserState> users(config.num_users);
  for (UserId i = 0; i < users.size(); ++i) {
    users[i].id = i;
    users[i].position = {stream.uniform(0.0, config.area_side_m),
                         stream.uniform(0.0, config.area_side_m)};
    users[i].heading = stream.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return users;
}

std::vector<double> draw_comp_latencies(const SimConfig& config, std::uint64_t round) {
  const std::uint64_t key = config.comp_latency_mode == CompLatencyMode::per_round ? round : 0;
  const auto [lo, hi] = config.comp_latency_range_s;
  std::vector<double> out(config.num_users);
  for (UserId i = 0; i < out.size(); ++i) {
    RandomStream stream = derive_stream(config.master_seed, StreamPurpose::compute, key, i);
    out[i] = stream.uniform(lo, hi);
  }
  return out;
}

scheduler::PolicyInput make_instance(const SimConfig& raw) {
  const SimConfig config = resolve_config(raw);
  const auto bss = channel::place_base_stations(config, config.bs_bandwidth_mhz);
  const auto users = place_users(config);
  scheduler::PolicyInput input;
  input.snapshot = channel::round_snapshot(users, bss, config.master_seed, 0);
  input.comp_latencies = draw_comp_latencies(config, 0);
  input.ledger = FairnessLedger(config.num_users);
  input.config = config;
  input.selection_stream = derive_stream(config.master_seed, StreamPurpose::selection, 0);
  return input;
}

Simulation::Simulation(SimConfig config, SimulationOptions options)
    : config_(resolve_config(std::move(config))), ledger_(config_.num_users) {
  bss_ = channel::place_base_stations(config_, config_.bs_bandwidth_mhz);
  users_ = place_users(config_);

  if (options.train && options.test) {
    train_ = std::move(*options.train);
    test_ = std::move(*options.test);
  } else {
    RandomStream data_stream = derive_stream(config_.master_seed, StreamPurpose::datagen, 0, 0);
    auto data = fl::generate_synthetic(config_, data_stream);
    train_ = std::move(data.train);
    test_ = std::move(data.test);
  }

  RandomStream split_stream = derive_stream(config_.master_seed, StreamPurpose::datagen, 0, 1);
  partitions_ = options.partition == PartitionMode::noniid
                    ? fl::partition_noniid(train_, config_.num_users, config_.shards_per_user, split_stream)
                    : fl::partition_iid(train_, config_.num_users, split_stream);

  global_ = fl::ModelParams::zeros(train_.num_classes, train_.dim);
  initial_accuracy_ = fl::evaluate(global_, test_);
}

RoundRecord Simulation::run_round(scheduler::Policy policy) {
  const std::uint64_t n = ledger_.round_index;

  const double dt = mobility::round_dt(config_, previous_latency_);
  mobility::step_all(users_, config_, dt, n);

  scheduler::PolicyInput input;
  input.snapshot = channel::round_snapshot(users_, bss_, config_.master_seed, n);
  input.comp_latencies = draw_comp_latencies(config_, n);
  input.ledger = ledger_;
  input.config = config_;
  input.selection_stream = derive_stream(config_.master_seed, StreamPurpose::selection, n);
  for (auto& user : users_) user.comp_latency_s = input.comp_latencies[user.id];

  Schedule schedule = scheduler::run_policy(policy, input);
  last_snapshot_ = std::move(input.snapshot);

  ledger_ = scheduler::update_ledger(std::move(ledger_), schedule);
  for (auto& user : users_) user.participation_count = ledger_.counts[user.id];

  const std::vector<UserId> selected = schedule.selected();
  if (!selected.empty()) {
    const fl::TrainOptions options{config_.local_epochs, config_.learning_rate, config_.batch_size};
    const auto locals = fl::train_users(global_, train_, partitions_, selected, options,
                                        config_.master_seed, n);
    std::vector<fl::LocalUpdate> updates;
    updates.reserve(selected.size());
    for (std::size_t j = 0; j < selected.size(); ++j) {
      updates.push_back({std::cref(locals[j]), partitions_[selected[j]].size(), true});
    }
    global_ = fl::aggregate(updates);
  }

  cumulative_time_ += schedule.round_latency;
  previous_latency_ = schedule.round_latency;

  RoundRecord record;
  record.round_index = n;
  record.accuracy = fl::evaluate(global_, test_);
  record.cumulative_time_s = cumulative_time_;
  record.participation_counts = ledger_.counts;
  record.schedule = std::move(schedule);
  return record;
}

}  // namespace flmob
