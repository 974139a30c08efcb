#pragma once

// Hand-built scheduling instances and an exhaustive search over them.

#include <cmath>
#include <limits>
#include <vector>

#include "flmob/channel.hpp"
#include "flmob/scheduler.hpp"
#include "flmob/simulation.hpp"
#include "flmob/units.hpp"
#include "support/oracles.hpp"

namespace testing {

/// Linear gain that yields the given spectral efficiency under `config`.
inline double gain_for_se(double se, const flmob::SimConfig& config) {
  const double snr = std::exp2(se) - 1.0;
  return snr * flmob::dbm_to_linear_mw(config.noise_psd_dbm_per_mhz) /
         flmob::dbm_to_linear_mw(config.tx_psd_dbm_per_mhz);
}

/// Policy input over a users x BSs table of spectral efficiencies.
inline flmob::scheduler::PolicyInput input_from_se(const std::vector<std::vector<double>>& se,
                                                   std::vector<double> comp,
                                                   flmob::SimConfig config) {
  const std::size_t n = se.size();
  const std::size_t m = se.front().size();
  config.num_users = n;
  config.num_bs = m;
  flmob::scheduler::PolicyInput in;
  in.snapshot.gains = flmob::Matrix(n, m);
  in.snapshot.distances = flmob::Matrix(n, m, 100.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) in.snapshot.gains(i, k) = gain_for_se(se[i][k], config);
  }
  in.comp_latencies = std::move(comp);
  in.ledger = flmob::FairnessLedger(n);
  in.config = config;
  in.selection_stream = flmob::derive_stream(config.master_seed, flmob::StreamPurpose::selection, 0);
  return in;
}

/// Round-0 instance of a small random world.
inline flmob::scheduler::PolicyInput small_instance(std::size_t n, std::size_t m, double rho1,
                                                   double rho2, std::uint64_t seed) {
  flmob::SimConfig c;
  c.num_users = n;
  c.num_bs = m;
  c.rho1 = rho1;
  c.rho2 = rho2;
  c.master_seed = seed;
  return flmob::make_instance(flmob::resolve_config(c));
}

struct Exhaustive {
  double latency = std::numeric_limits<double>::infinity();
  std::size_t feasible = 0;
};

/// Tries every map user -> {unselected, BS 0..M-1}; feasible maps keep the
/// necessary users and at least `min_selected` participants.
inline Exhaustive exhaustive(const flmob::scheduler::PolicyInput& in,
                             const std::vector<std::size_t>& necessary, std::size_t min_selected) {
  const std::size_t n = in.snapshot.num_users();
  const std::size_t m = in.snapshot.num_bs();
  const auto se = flmob::channel::spectral_efficiencies(in.snapshot, in.config);
  std::size_t codes = 1;
  for (std::size_t i = 0; i < n; ++i) codes *= m + 1;

  Exhaustive best;
  std::vector<std::size_t> choice(n);
  for (std::size_t code = 0; code < codes; ++code) {
    std::size_t rest = code, selected = 0;
    for (std::size_t i = 0; i < n; ++i) {
      choice[i] = rest % (m + 1);
      rest /= m + 1;
      if (choice[i] != 0) ++selected;
    }
    if (selected < min_selected) continue;
    bool ok = true;
    for (auto u : necessary) ok = ok && choice[u] != 0;
    if (!ok) continue;
    ++best.feasible;
    double worst = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<oracle::LinkUser> users;
      for (std::size_t i = 0; i < n; ++i) {
        if (choice[i] == k + 1) users.push_back({in.comp_latencies[i], se(i, k)});
      }
      worst = std::max(worst, oracle::min_max_time(users, in.config.bandwidth_mhz(k) * 1e6,
                                                   in.config.model_size_bits));
    }
    best.latency = std::min(best.latency, worst);
  }
  return best;
}

}  // namespace testing
