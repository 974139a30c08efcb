#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flmob/bandwidth.hpp"
#include "flmob/config.hpp"
#include "flmob/rng.hpp"
#include "flmob/types.hpp"

namespace flmob::scheduler {

/// Everything a policy sees at the start of a round. Policies take it by
/// const reference and draw from a private copy of `selection_stream`, so
/// the same input always yields the same schedule.
struct PolicyInput {
  ChannelSnapshot snapshot;
  std::vector<double> comp_latencies;
  FairnessLedger ledger;
  /// Per-BS budgets are read through config.bandwidth_mhz(k).
  SimConfig config;
  RandomStream selection_stream{0};
};

enum class Policy { dagsa, rs, ub, fedcs_low, fedcs_high, sa };

inline constexpr double kFedCsLowThresholdS = 0.6;
inline constexpr double kFedCsHighThresholdS = 1.0;

/// Parses dagsa | rs | ub | fedcs-low | fedcs-high | sa.
std::optional<Policy> parse_policy(std::string_view name);
std::string to_string(Policy policy);
std::vector<Policy> all_policies();

/// Users whose cumulative participation is below rho1 * n.
std::vector<UserId> necessary_set(const FairnessLedger& ledger, double rho1);

/// Minimum number of participants per round, ceil(N * rho2).
std::size_t required_participants(std::size_t num_users, double rho2);

/// BS with the largest gain toward `user`; lowest BS id wins ties.
BsId best_bs(const ChannelSnapshot& snapshot, UserId user);

/// Bandwidth problem for the users `members` (any order) on BS `bs`.
bandwidth::BsProblem make_problem(const PolicyInput& input, const Matrix& spectral_eff,
                                  BsId bs, std::span<const UserId> members);

enum class Allocation { optimal, even };

/// Fills bandwidths and latencies for a fixed assignment.
Schedule build_schedule(const PolicyInput& input, std::vector<std::vector<UserId>> assignments,
                        Allocation allocation);

/// Threshold history recorded while DAGSA runs.
struct DagsaTrace {
  std::vector<double> thresholds;
};

/// Delay-aware greedy search over user selection and BS assignment.
Schedule dagsa(const PolicyInput& input, DagsaTrace* trace = nullptr);

/// Bernoulli(rho2) selection (resampled until nonempty), best-gain BS,
/// optimal bandwidth.
Schedule randomly_select(const PolicyInput& input);

/// Same selection and assignment as randomly_select(), even bandwidth split.
Schedule uniform_bandwidth(const PolicyInput& input);

/// Per-BS max-gain greedy admission under an even split until the latency
/// threshold would be exceeded.
Schedule fedcs(const PolicyInput& input, double threshold_s);

/// Everyone participates at the best-gain BS with optimal bandwidth.
Schedule select_all(const PolicyInput& input);

Schedule run_policy(Policy policy, const PolicyInput& input);

/// Counts one more participation for every selected user; advances n.
FairnessLedger update_ledger(FairnessLedger ledger, const Schedule& schedule);

}  // namespace flmob::scheduler
