#pragma once

#include <span>
#include <vector>

#include "flmob/types.hpp"

namespace flmob::bandwidth {

struct BsUser {
  UserId id = 0;
  double comp_latency_s = 0.0;
  /// log2(1 + SNR) toward this BS, bits/s/Hz. Must be > 0.
  double spectral_efficiency = 0.0;
};

/// Min-max latency bandwidth split for the users served by one BS.
struct BsProblem {
  double bs_bandwidth_hz = 0.0;
  std::vector<BsUser> users;
  double model_size_bits = 0.0;
};

inline constexpr double kDefaultTolerance = 1e-9;

/// Sum over users of S / ((t - t_comp) * g): the total bandwidth (Hz) needed
/// for every user to finish by time t. Strictly decreasing for
/// t > max t_comp.
double required_bandwidth(const BsProblem& problem, double t);

/// Smallest common finish time t* such that required_bandwidth(t*) equals
/// the BS budget. Solved by bisection until the bracket is narrower than
/// `tol`; the upper (feasible) end is returned, so the implied allocation
/// never exceeds the budget. Returns 0 for an empty user set.
double optimal_time(const BsProblem& problem, double tol = kDefaultTolerance);

/// Per-user bandwidth (Hz, in problem order) S / ((t* - t_comp) * g).
/// Throws std::domain_error if t_star does not exceed every compute latency.
std::vector<double> optimal_allocation(const BsProblem& problem, double t_star);

/// max_i t_comp + S / ((B / n) * g_i): latency of an equal split.
double even_split_latency(const BsProblem& problem);

/// Finish time of one user given its bandwidth in Hz.
double finish_time(const BsUser& user, double bandwidth_hz, double model_size_bits);

}  // namespace flmob::bandwidth
