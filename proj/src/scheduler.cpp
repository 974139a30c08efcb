#include "flmob/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flmob/channel.hpp"
#include "flmob/units.hpp"

namespace flmob::scheduler {

std::optional<Policy> parse_policy(std::string_view name) {
  if (name == "dagsa") return Policy::dagsa;
  if (name == "rs") return Policy::rs;
  if (name == "ub") return Policy::ub;
  if (name == "fedcs-low") return Policy::fedcs_low;
  if (name == "fedcs-high") return Policy::fedcs_high;
  if (name == "sa") return Policy::sa;
  return std::nullopt;
}

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::dagsa: return "dagsa";
    case Policy::rs: return "rs";
    case Policy::ub: return "ub";
    case Policy::fedcs_low: return "fedcs-low";
    case Policy::fedcs_high: return "fedcs-high";
    case Policy::sa: return "sa";
  }
  return "unknown";
}

std::vector<Policy> all_policies() {
  return {Policy::dagsa, Policy::rs, Policy::ub, Policy::fedcs_low, Policy::fedcs_high, Policy::sa};
}

std::vector<UserId> necessary_set(const FairnessLedger& ledger, double rho1) {
  const double floor_count = rho1 * static_cast<double>(ledger.round_index);
  std::vector<UserId> out;
  for (UserId i = 0; i < ledger.counts.size(); ++i) {
    // The epsilon absorbs rho1 * n landing a hair above an integer.
    if (static_cast<double>(ledger.counts[i]) + 1e-9 < floor_count) out.push_back(i);
  }
  return out;
}

std::size_t required_participants(std::size_t num_users, double rho2) {
  const double need = std::ceil(static_cast<double>(num_users) * rho2 - 1e-9);
  return std::min(num_users, static_cast<std::size_t>(std::max(0.0, need)));
}

BsId best_bs(const ChannelSnapshot& snapshot, UserId user) {
  BsId best = 0;
  for (BsId k = 1; k < snapshot.num_bs(); ++k) {
    if (snapshot.gains(user, k) > snapshot.gains(user, best)) best = k;
  }
  return best;
}

bandwidth::BsProblem make_problem(const PolicyInput& input, const Matrix& spectral_eff, BsId bs,
                                  std::span<const UserId> members) {
  std::vector<UserId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  bandwidth::BsProblem problem;
  problem.bs_bandwidth_hz = input.config.bandwidth_mhz(bs) * kHzPerMHz;
  problem.model_size_bits = input.config.model_size_bits;
  problem.users.reserve(sorted.size());
  for (UserId i : sorted) {
    problem.users.push_back({i, input.comp_latencies[i], spectral_eff(i, bs)});
  }
  return problem;
}

Schedule build_schedule(const PolicyInput& input, std::vector<std::vector<UserId>> assignments,
                        Allocation allocation) {
  const Matrix se = channel::spectral_efficiencies(input.snapshot, input.config);
  const std::size_t m = input.snapshot.num_bs();
  Schedule out;
  out.assignments = std::move(assignments);
  out.assignments.resize(m);
  out.bandwidth_mhz.assign(input.snapshot.num_users(), 0.0);
  out.per_bs_latency.assign(m, 0.0);

  for (BsId k = 0; k < m; ++k) {
    auto& members = out.assignments[k];
    std::sort(members.begin(), members.end());
    if (members.empty()) continue;
    const auto problem = make_problem(input, se, k, members);
    if (allocation == Allocation::optimal) {
      const double t_star = bandwidth::optimal_time(problem);
      const auto alloc = bandwidth::optimal_allocation(problem, t_star);
      for (std::size_t j = 0; j < members.size(); ++j) {
        out.bandwidth_mhz[members[j]] = alloc[j] / kHzPerMHz;
      }
      out.per_bs_latency[k] = t_star;
    } else {
      const double share = input.config.bandwidth_mhz(k) / static_cast<double>(members.size());
      for (UserId i : members) out.bandwidth_mhz[i] = share;
      out.per_bs_latency[k] = bandwidth::even_split_latency(problem);
    }
  }
  out.round_latency = *std::max_element(out.per_bs_latency.begin(), out.per_bs_latency.end());
  return out;
}

namespace {

// Working state of one DAGSA invocation.
class GreedySearch {
 public:
  explicit GreedySearch(const PolicyInput& input)
      : input_(input),
        se_(channel::spectral_efficiencies(input.snapshot, input.config)),
        sets_(input.snapshot.num_bs()) {}

  // Optimal time of BS k if `extra` were added to it.
  double time_with(BsId k, std::optional<UserId> extra) const {
    std::vector<UserId> members = sets_[k];
    if (extra) members.push_back(*extra);
    return bandwidth::optimal_time(make_problem(input_, se_, k, members));
  }

  // Candidate in `pool` with the best gain toward k; lowest id on ties.
  // `pool` is kept sorted ascending.
  std::size_t best_toward(const std::vector<UserId>& pool, BsId k) const {
    std::size_t best = 0;
    for (std::size_t j = 1; j < pool.size(); ++j) {
      if (input_.snapshot.gains(pool[j], k) > input_.snapshot.gains(pool[best], k)) best = j;
    }
    return best;
  }

  void add(BsId k, UserId user) {
    sets_[k].push_back(user);
    ++selected_;
  }

  // Packs users from `pool` into BS k in best-gain order while the optimal
  // time stays within the threshold.
  void pack(BsId k, std::vector<UserId>& pool) {
    while (!pool.empty()) {
      const std::size_t j = best_toward(pool, k);
      if (time_with(k, pool[j]) > threshold_) break;
      add(k, pool[j]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }

  void raise_threshold(double t) { threshold_ = std::max(threshold_, t); }
  double threshold() const { return threshold_; }
  std::size_t selected() const { return selected_; }
  std::vector<std::vector<UserId>> take_sets() { return std::move(sets_); }

 private:
  const PolicyInput& input_;
  Matrix se_;
  std::vector<std::vector<UserId>> sets_;
  double threshold_ = 0.0;
  std::size_t selected_ = 0;
};

std::vector<std::vector<UserId>> best_bs_assignment(const PolicyInput& input,
                                                    std::span<const UserId> users) {
  std::vector<std::vector<UserId>> sets(input.snapshot.num_bs());
  for (UserId i : users) sets[best_bs(input.snapshot, i)].push_back(i);
  return sets;
}

std::vector<UserId> bernoulli_selection(const PolicyInput& input) {
  RandomStream stream = input.selection_stream;
  const std::size_t n = input.snapshot.num_users();
  std::vector<UserId> picked;
  while (picked.empty()) {
    for (UserId i = 0; i < n; ++i) {
      if (stream.bernoulli(input.config.rho2)) picked.push_back(i);
    }
  }
  return picked;
}

}  // namespace

Schedule dagsa(const PolicyInput& input, DagsaTrace* trace) {
  const std::size_t n = input.snapshot.num_users();
  const std::size_t m = input.snapshot.num_bs();
  RandomStream stream = input.selection_stream;
  GreedySearch search(input);

  auto record = [&] {
    if (trace != nullptr) trace->thresholds.push_back(search.threshold());
  };

  std::vector<UserId> necessary = necessary_set(input.ledger, input.config.rho1);
  std::vector<UserId> rest;
  for (UserId i = 0; i < n; ++i) {
    if (!std::binary_search(necessary.begin(), necessary.end(), i)) rest.push_back(i);
  }

  // Phase 1: every necessary user must participate.
  while (!necessary.empty()) {
    const std::size_t j = stream.index(necessary.size());
    const UserId user = necessary[j];
    necessary.erase(necessary.begin() + static_cast<std::ptrdiff_t>(j));
    const BsId home = best_bs(input.snapshot, user);
    search.add(home, user);
    search.raise_threshold(search.time_with(home, std::nullopt));
    record();
    for (BsId k = 0; k < m; ++k) search.pack(k, necessary);
  }

  // Phase 2: fill up to the per-round floor, raising the threshold as needed.
  const std::size_t target = required_participants(n, input.config.rho2);
  while (search.selected() < target && !rest.empty()) {
    for (BsId k = 0; k < m; ++k) search.pack(k, rest);
    if (search.selected() < target && !rest.empty()) {
      const BsId k = static_cast<BsId>(stream.index(m));
      const std::size_t j = search.best_toward(rest, k);
      search.add(k, rest[j]);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      search.raise_threshold(search.time_with(k, std::nullopt));
      record();
    }
  }

  return build_schedule(input, search.take_sets(), Allocation::optimal);
}

Schedule randomly_select(const PolicyInput& input) {
  const auto picked = bernoulli_selection(input);
  return build_schedule(input, best_bs_assignment(input, picked), Allocation::optimal);
}

Schedule uniform_bandwidth(const PolicyInput& input) {
  const auto picked = bernoulli_selection(input);
  return build_schedule(input, best_bs_assignment(input, picked), Allocation::even);
}

Schedule fedcs(const PolicyInput& input, double threshold_s) {
  if (!(threshold_s > 0.0)) throw std::invalid_argument("fedcs: threshold must be > 0");
  const std::size_t n = input.snapshot.num_users();
  const Matrix se = channel::spectral_efficiencies(input.snapshot, input.config);

  std::vector<UserId> everyone(n);
  for (UserId i = 0; i < n; ++i) everyone[i] = i;
  auto candidates = best_bs_assignment(input, everyone);

  std::vector<std::vector<UserId>> admitted(input.snapshot.num_bs());
  for (BsId k = 0; k < candidates.size(); ++k) {
    auto& pool = candidates[k];
    std::stable_sort(pool.begin(), pool.end(), [&](UserId a, UserId b) {
      return input.snapshot.gains(a, k) > input.snapshot.gains(b, k);
    });
    for (UserId user : pool) {
      std::vector<UserId> trial = admitted[k];
      trial.push_back(user);
      if (bandwidth::even_split_latency(make_problem(input, se, k, trial)) > threshold_s) break;
      admitted[k] = std::move(trial);
    }
  }
  return build_schedule(input, std::move(admitted), Allocation::even);
}

Schedule select_all(const PolicyInput& input) {
  std::vector<UserId> everyone(input.snapshot.num_users());
  for (UserId i = 0; i < everyone.size(); ++i) everyone[i] = i;
  return build_schedule(input, best_bs_assignment(input, everyone), Allocation::optimal);
}

Schedule run_policy(Policy policy, const PolicyInput& input) {
  switch (policy) {
    case Policy::dagsa: return dagsa(input);
    case Policy::rs: return randomly_select(input);
    case Policy::ub: return uniform_bandwidth(input);
    case Policy::fedcs_low: return fedcs(input, kFedCsLowThresholdS);
    case Policy::fedcs_high: return fedcs(input, kFedCsHighThresholdS);
    case Policy::sa: return select_all(input);
  }
  throw std::invalid_argument("run_policy: unknown policy");
}

FairnessLedger update_ledger(FairnessLedger ledger, const Schedule& schedule) {
  for (const auto& members : schedule.assignments) {
    for (UserId i : members) ++ledger.counts.at(i);
  }
  ++ledger.round_index;
  return ledger;
}

}  // namespace flmob::scheduler
