#include "flmob/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace flmob::mobility {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_heading(double heading) {
  double h = std::fmod(heading, kTwoPi);
  if (h < 0.0) h += kTwoPi;
  if (h >= kTwoPi) h = 0.0;
  return h;
}

// Time (distance, since the direction is unit length) until the coordinate
// hits a wall of [0, side].
double distance_to_wall(double coord, double dir, double side) {
  if (dir > 0.0) return std::max(0.0, (side - coord) / dir);
  if (dir < 0.0) return std::max(0.0, -coord / dir);
  return std::numeric_limits<double>::infinity();
}

}  // namespace

Traversal advance(Position start, double heading, double distance, double area_side) {
  double dx = std::cos(heading);
  double dy = std::sin(heading);
  // cos(pi/2) and friends are ~1e-17, not 0; treat those as axis-aligned.
  if (std::abs(dx) < 1e-15) dx = 0.0;
  if (std::abs(dy) < 1e-15) dy = 0.0;

  Traversal out;
  double x = std::clamp(start.x, 0.0, area_side);
  double y = std::clamp(start.y, 0.0, area_side);
  double remaining = std::max(0.0, distance);

  while (remaining > 0.0) {
    const double to_x = distance_to_wall(x, dx, area_side);
    const double to_y = distance_to_wall(y, dy, area_side);
    const double to_wall = std::min(to_x, to_y);
    if (remaining <= to_wall) {
      x += dx * remaining;
      y += dy * remaining;
      out.path_length += remaining;
      break;
    }
    x += dx * to_wall;
    y += dy * to_wall;
    out.path_length += to_wall;
    remaining -= to_wall;
    if (to_x <= to_y) {
      x = dx > 0.0 ? area_side : 0.0;
      dx = -dx;
      ++out.reflections;
    }
    if (to_y <= to_x) {
      y = dy > 0.0 ? area_side : 0.0;
      dy = -dy;
      ++out.reflections;
    }
  }

  out.position = {std::clamp(x, 0.0, area_side), std::clamp(y, 0.0, area_side)};
  out.heading = normalize_heading(std::atan2(dy, dx));
  if (dx == 0.0 && dy == 0.0) out.heading = normalize_heading(heading);
  return out;
}

UserState step_with_heading(const UserState& user, double heading, double speed,
                            double dt, double area_side) {
  UserState next = user;
  const Traversal t = advance(user.position, heading, speed * dt, area_side);
  next.position = t.position;
  next.heading = t.heading;
  return next;
}

UserState step(const UserState& user, double speed, double dt, double area_side,
               RandomStream& stream) {
  const double heading = stream.uniform(0.0, kTwoPi);
  return step_with_heading(user, heading, speed, dt, area_side);
}

double round_dt(const SimConfig& config, std::optional<double> previous_round_latency) {
  if (config.mobility_dt_mode == MobilityDtMode::realized_previous_round &&
      previous_round_latency.has_value()) {
    return *previous_round_latency;
  }
  return config.mobility_period_s;
}

void step_all(std::span<UserState> users, const SimConfig& config, double dt,
              std::uint64_t round) {
  const auto n = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& user = users[static_cast<std::size_t>(i)];
    RandomStream stream = derive_stream(config.master_seed, StreamPurpose::mobility, round, user.id);
    user = step(user, config.speed_mps, dt, config.area_side_m, stream);
  }
}

void step_all_serial(std::span<UserState> users, const SimConfig& config, double dt,
                     std::uint64_t round) {
  for (auto& user : users) {
    RandomStream stream = derive_stream(config.master_seed, StreamPurpose::mobility, round, user.id);
    user = step(user, config.speed_mps, dt, config.area_side_m, stream);
  }
}

}  // namespace flmob::mobility
