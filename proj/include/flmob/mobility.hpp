#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "flmob/config.hpp"
#include "flmob/rng.hpp"
#include "flmob/types.hpp"

namespace flmob::mobility {

/// Result of moving along a straight line inside the square [0, L]^2 with
/// specular reflection at the walls.
struct Traversal {
  Position position;
  /// Heading after the last reflection, radians in [0, 2*pi).
  double heading = 0.0;
  /// Sum of the straight segments actually walked.
  double path_length = 0.0;
  std::size_t reflections = 0;
};

/// Walks `distance` meters from `start` along `heading`, folding the path at
/// each wall crossing. Multiple reflections (including corners) are handled
/// segment by segment so the walked length is preserved.
Traversal advance(Position start, double heading, double distance, double area_side);

/// Random Direction step: draws a fresh heading uniformly from [0, 2*pi) and
/// moves `speed * dt` meters with reflection.
UserState step(const UserState& user, double speed, double dt, double area_side,
               RandomStream& stream);

/// Same as step() with the heading supplied instead of drawn.
UserState step_with_heading(const UserState& user, double heading, double speed,
                            double dt, double area_side);

/// Movement interval for the coming round.
double round_dt(const SimConfig& config, std::optional<double> previous_round_latency);

/// Steps every user for round `round`, each from its own derived stream.
/// Parallel over users; produces the same result as step_all_serial().
void step_all(std::span<UserState> users, const SimConfig& config, double dt,
              std::uint64_t round);

/// Reference implementation of step_all() kept for testing and benchmarks.
void step_all_serial(std::span<UserState> users, const SimConfig& config, double dt,
                     std::uint64_t round);

}  // namespace flmob::mobility
