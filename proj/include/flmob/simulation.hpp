#pragma once

#include <optional>
#include <vector>

#include "flmob/config.hpp"
#include "flmob/fl_engine.hpp"
#include "flmob/scheduler.hpp"
#include "flmob/types.hpp"

namespace flmob {

enum class PartitionMode { noniid, iid };

struct SimulationOptions {
  PartitionMode partition = PartitionMode::noniid;
  /// Externally supplied data; synthetic blobs are generated when empty.
  std::optional<fl::Dataset> train;
  std::optional<fl::Dataset> test;
};

/// Resolves per-BS bandwidths (heterogeneous draws included) into an
/// explicit list and validates the result.
SimConfig resolve_config(SimConfig config);

/// Initial user positions: uniform over the area from the placement stream.
std::vector<UserState> place_users(const SimConfig& config);

/// Compute latencies for round `round` (or the fixed per-user draw).
std::vector<double> draw_comp_latencies(const SimConfig& config, std::uint64_t round);

/// Policy input for round 0 of a fresh world built from `config`; used for
/// standalone scheduling instances.
scheduler::PolicyInput make_instance(const SimConfig& config);

/// One federated-learning run over the mobile multi-BS network.
class Simulation {
 public:
  explicit Simulation(SimConfig config, SimulationOptions options = {});

  /// mobility -> channel -> compute draws -> policy -> ledger -> local
  /// training -> aggregation -> evaluation.
  RoundRecord run_round(scheduler::Policy policy);

  const SimConfig& config() const { return config_; }
  const std::vector<UserState>& users() const { return users_; }
  const std::vector<BaseStation>& base_stations() const { return bss_; }
  const FairnessLedger& ledger() const { return ledger_; }
  const fl::ModelParams& global_model() const { return global_; }
  const std::vector<fl::IndexSet>& partitions() const { return partitions_; }
  /// Snapshot used by the most recent round.
  const ChannelSnapshot& last_snapshot() const { return last_snapshot_; }
  double initial_accuracy() const { return initial_accuracy_; }
  double cumulative_time() const { return cumulative_time_; }
  std::size_t round_index() const { return ledger_.round_index; }

 private:
  SimConfig config_;
  std::vector<BaseStation> bss_;
  std::vector<UserState> users_;
  fl::Dataset train_;
  fl::Dataset test_;
  std::vector<fl::IndexSet> partitions_;
  fl::ModelParams global_;
  FairnessLedger ledger_;
  ChannelSnapshot last_snapshot_;
  std::optional<double> previous_latency_;
  double cumulative_time_ = 0.0;
  double initial_accuracy_ = 0.0;
};

}  // namespace flmob
