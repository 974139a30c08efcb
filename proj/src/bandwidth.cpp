#include "flmob/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flmob::bandwidth {

namespace {

double max_comp_latency(const BsProblem& problem) {
  double t = 0.0;
  for (const auto& u : problem.users) t = std::max(t, u.comp_latency_s);
  return t;
}

}  // namespace

double required_bandwidth(const BsProblem& problem, double t) {
  double total = 0.0;
  for (const auto& u : problem.users) {
    const double slack = t - u.comp_latency_s;
    if (slack <= 0.0) return std::numeric_limits<double>::infinity();
    total += problem.model_size_bits / (slack * u.spectral_efficiency);
  }
  return total;
}

double optimal_time(const BsProblem& problem, double tol) {
  if (problem.users.empty()) return 0.0;
  const double budget = problem.bs_bandwidth_hz;

  double lo = max_comp_latency(problem) + 1e-12;
  double hi = lo + 1.0;
  while (required_bandwidth(problem, hi) > budget) {
    const double width = hi - lo;
    lo = hi;
    hi = lo + 2.0 * width;
  }

  // Invariant: required(lo) > budget >= required(hi).
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (required_bandwidth(problem, mid) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::vector<double> optimal_allocation(const BsProblem& problem, double t_star) {
  std::vector<double> out;
  out.reserve(problem.users.size());
  for (const auto& u : problem.users) {
    const double slack = t_star - u.comp_latency_s;
    if (!(slack > 0.0)) {
      throw std::domain_error("optimal_allocation: t_star must exceed every compute latency");
    }
    out.push_back(problem.model_size_bits / (slack * u.spectral_efficiency));
  }
  return out;
}

double finish_time(const BsUser& user, double bandwidth_hz, double model_size_bits) {
  if (!(bandwidth_hz > 0.0)) return std::numeric_limits<double>::infinity();
  return user.comp_latency_s + model_size_bits / (bandwidth_hz * user.spectral_efficiency);
}

double even_split_latency(const BsProblem& problem) {
  if (problem.users.empty()) return 0.0;
  const double share = problem.bs_bandwidth_hz / static_cast<double>(problem.users.size());
  double worst = 0.0;
  for (const auto& u : problem.users) {
    worst = std::max(worst, finish_time(u, share, problem.model_size_bits));
  }
  return worst;
}

}  // namespace flmob::bandwidth
