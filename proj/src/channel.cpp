#include "flmob/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flmob/units.hpp"

namespace flmob::channel {

double path_loss_db(double distance_m) {
  const double d_km = std::max(distance_m, kMinDistanceM) / 1000.0;
  return 128.1 + 37.6 * std::log10(d_km);
}

double path_gain(double distance_m) { return std::pow(10.0, -path_loss_db(distance_m) / 10.0); }

double gain_with_fading(double distance_m, double fading_power) {
  return path_gain(distance_m) * fading_power;
}

double draw_gain(double distance_m, RandomStream& stream) {
  return gain_with_fading(distance_m, stream.exponential());
}

double snr(double gain, const SimConfig& config) {
  return dbm_to_linear_mw(config.tx_psd_dbm_per_mhz) * gain /
         dbm_to_linear_mw(config.noise_psd_dbm_per_mhz);
}

double spectral_efficiency(double snr) { return std::log2(1.0 + snr); }

double uplink_rate(double bandwidth_mhz, double snr) {
  return bandwidth_mhz * kHzPerMHz * spectral_efficiency(snr);
}

double upload_latency(double model_size_bits, double rate_bps) {
  if (!(rate_bps > 0.0)) return std::numeric_limits<double>::infinity();
  return model_size_bits / rate_bps;
}

std::vector<double> base_station_bandwidths(const SimConfig& config) {
  std::vector<double> out(config.num_bs);
  for (std::size_t k = 0; k < config.num_bs; ++k) out[k] = config.bandwidth_mhz(k);
  if (!config.heterogeneous_bandwidth) return out;

  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  // Stream index 1 keeps these draws apart from BS positions (index 0).
  RandomStream stream = derive_stream(config.master_seed, StreamPurpose::placement, 0, 1);
  double drawn_total = 0.0;
  for (auto& b : out) {
    b = stream.uniform(0.5, 1.5);
    drawn_total += b;
  }
  for (auto& b : out) b *= total / drawn_total;
  return out;
}

std::vector<BaseStation> place_base_stations(const SimConfig& config,
                                             std::span<const double> bandwidths_mhz) {
  const std::size_t m = config.num_bs;
  const auto rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m)))));
  const std::size_t cols = (m + rows - 1) / rows;
  const double cell_w = config.area_side_m / static_cast<double>(cols);
  const double cell_h = config.area_side_m / static_cast<double>(rows);

  RandomStream stream = derive_stream(config.master_seed, StreamPurpose::placement, 0, 0);
  std::vector<BaseStation> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t r = k / cols;
    const std::size_t c = k % cols;
    // Jitter within the central half of the cell.
    const double x = (static_cast<double>(c) + 0.5 + stream.uniform(-0.25, 0.25)) * cell_w;
    const double y = (static_cast<double>(r) + 0.5 + stream.uniform(-0.25, 0.25)) * cell_h;
    out.push_back({k, {x, y}, bandwidths_mhz[k]});
  }
  return out;
}

namespace {

void fill_user_row(ChannelSnapshot& snap, std::size_t row, const UserState& user,
                   std::span<const BaseStation> bss, RandomStream& stream) {
  for (std::size_t k = 0; k < bss.size(); ++k) {
    const double d = std::max(distance(user.position, bss[k].position), kMinDistanceM);
    snap.distances(row, k) = d;
    snap.gains(row, k) = draw_gain(d, stream);
  }
}

}  // namespace

ChannelSnapshot snapshot(std::span<const UserState> users, std::span<const BaseStation> bss,
                         RandomStream& stream) {
  ChannelSnapshot snap{Matrix(users.size(), bss.size()), Matrix(users.size(), bss.size())};
  for (std::size_t i = 0; i < users.size(); ++i) fill_user_row(snap, i, users[i], bss, stream);
  return snap;
}

ChannelSnapshot round_snapshot(std::span<const UserState> users, std::span<const BaseStation> bss,
                               std::uint64_t master_seed, std::uint64_t round) {
  ChannelSnapshot snap{Matrix(users.size(), bss.size()), Matrix(users.size(), bss.size())};
  const auto n = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    RandomStream stream = derive_stream(master_seed, StreamPurpose::fading, round, users[row].id);
    fill_user_row(snap, row, users[row], bss, stream);
  }
  return snap;
}

ChannelSnapshot round_snapshot_serial(std::span<const UserState> users,
                                      std::span<const BaseStation> bss,
                                      std::uint64_t master_seed, std::uint64_t round) {
  ChannelSnapshot snap{Matrix(users.size(), bss.size()), Matrix(users.size(), bss.size())};
  for (std::size_t i = 0; i < users.size(); ++i) {
    RandomStream stream = derive_stream(master_seed, StreamPurpose::fading, round, users[i].id);
    fill_user_row(snap, i, users[i], bss, stream);
  }
  return snap;
}

Matrix spectral_efficiencies(const ChannelSnapshot& snap, const SimConfig& config) {
  Matrix out(snap.num_users(), snap.num_bs());
  for (std::size_t i = 0; i < snap.num_users(); ++i) {
    for (std::size_t k = 0; k < snap.num_bs(); ++k) {
      out(i, k) = spectral_efficiency(snr(snap.gains(i, k), config));
    }
  }
  return out;
}

}  // namespace flmob::channel
