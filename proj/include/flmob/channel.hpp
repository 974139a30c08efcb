#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flmob/config.hpp"
#include "flmob/rng.hpp"
#include "flmob/types.hpp"

namespace flmob::channel {

/// Users closer than this to a BS are treated as being at this distance.
inline constexpr double kMinDistanceM = 1.0;

/// 128.1 + 37.6 log10(D / 1 km) dB. Distances below kMinDistanceM are clamped.
double path_loss_db(double distance_m);

/// Mean (fading-free) linear power gain at `distance_m`.
double path_gain(double distance_m);

/// Path gain scaled by the given fading power sample.
double gain_with_fading(double distance_m, double fading_power);

/// Path gain times an exponential(1) fading power draw (Rayleigh amplitude).
double draw_gain(double distance_m, RandomStream& stream);

/// Receive SNR at maximum transmit power. Both power and noise are spectral
/// densities, so the ratio does not depend on the allocated bandwidth.
double snr(double gain, const SimConfig& config);

/// log2(1 + snr), bits/s/Hz.
double spectral_efficiency(double snr);

/// Shannon rate in bits/s for a bandwidth in MHz.
double uplink_rate(double bandwidth_mhz, double snr);

/// S / rate in seconds; +infinity when the rate is zero.
double upload_latency(double model_size_bits, double rate_bps);

/// Places BSs on a jittered regular grid covering the area.
std::vector<BaseStation> place_base_stations(const SimConfig& config,
                                             std::span<const double> bandwidths_mhz);

/// Per-BS bandwidths for a config; draws from U[0.5, 1.5] MHz (rescaled to
/// the configured total) in heterogeneous mode.
std::vector<double> base_station_bandwidths(const SimConfig& config);

/// Distances and independently faded gains for all pairs, drawn from
/// `stream` in row-major (user, BS) order.
ChannelSnapshot snapshot(std::span<const UserState> users,
                         std::span<const BaseStation> bss, RandomStream& stream);

/// Round snapshot with per-user streams derived from (seed, fading, round,
/// user id). Parallel over users.
ChannelSnapshot round_snapshot(std::span<const UserState> users,
                               std::span<const BaseStation> bss,
                               std::uint64_t master_seed, std::uint64_t round);

/// Reference implementation of round_snapshot().
ChannelSnapshot round_snapshot_serial(std::span<const UserState> users,
                                      std::span<const BaseStation> bss,
                                      std::uint64_t master_seed, std::uint64_t round);

/// log2(1 + SNR) for every pair of a snapshot.
Matrix spectral_efficiencies(const ChannelSnapshot& snap, const SimConfig& config);

}  // namespace flmob::channel
