#include "doctest.h"

#include <cmath>
#include <limits>

#include "flmob/channel.hpp"
#include "flmob/units.hpp"

using namespace flmob;

TEST_SUITE("channel") {

TEST_CASE("path loss reference points") {
  CHECK(channel::path_loss_db(1000.0) == doctest::Approx(128.1).epsilon(1e-12));
  CHECK(channel::path_loss_db(100.0) == doctest::Approx(90.5).epsilon(1e-12));
  CHECK(std::abs(channel::path_loss_db(500.0) - 116.78) < 0.01);
}

TEST_CASE("path loss is increasing and clamped below 1 m") {
  double prev = channel::path_loss_db(1.0);
  for (double d = 1.5; d < 5000.0; d *= 1.3) {
    const double pl = channel::path_loss_db(d);
    CHECK(pl > prev);
    prev = pl;
  }
  CHECK(channel::path_loss_db(0.0) == channel::path_loss_db(1.0));
  CHECK(channel::path_loss_db(0.3) == channel::path_loss_db(1.0));
}

TEST_CASE("gain with forced fading") {
  CHECK(channel::gain_with_fading(1000.0, 1.0) == doctest::Approx(std::pow(10.0, -12.81)).epsilon(1e-4));
  CHECK(channel::gain_with_fading(100.0, 0.5) ==
        doctest::Approx(0.5 * std::pow(10.0, -9.05)).epsilon(1e-12));
}

TEST_CASE("fading averages to the path gain") {
  auto s = derive_stream(9, StreamPurpose::fading, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += channel::draw_gain(250.0, s) / channel::path_gain(250.0);
  CHECK(std::abs(sum / n - 1.0) < 0.02);
}

TEST_CASE("snr at maximum power") {
  SimConfig c;
  const double g = std::pow(10.0, -12.81);
  // 14 - (-114) = 128 dB of link budget against 128.1 dB of path loss.
  CHECK(channel::snr(g, c) == doctest::Approx(std::pow(10.0, -0.01)).epsilon(1e-3));
  CHECK(channel::snr(2.0 * g, c) == doctest::Approx(2.0 * channel::snr(g, c)).epsilon(1e-14));
  const double unit = dbm_to_linear_mw(c.noise_psd_dbm_per_mhz) / dbm_to_linear_mw(c.tx_psd_dbm_per_mhz);
  CHECK(channel::snr(unit, c) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uplink rate and upload latency") {
  CHECK(channel::uplink_rate(1.0, 3.0) == doctest::Approx(2.0e6));
  CHECK(channel::uplink_rate(0.0, 3.0) == 0.0);
  CHECK(channel::uplink_rate(0.5, 15.0) == doctest::Approx(2.0e6));
  CHECK(channel::upload_latency(1e6, 2e6) == doctest::Approx(0.5));
  CHECK(std::isinf(channel::upload_latency(1e6, 0.0)));
  CHECK(channel::upload_latency(1e6, channel::uplink_rate(1.0, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("rate is monotone in both arguments and linear in bandwidth") {
  for (double b = 0.1; b < 3.0; b += 0.2) {
    for (double snr = 0.01; snr < 1e4; snr *= 3.0) {
      const double r = channel::uplink_rate(b, snr);
      CHECK(channel::uplink_rate(b + 0.1, snr) > r);
      CHECK(channel::uplink_rate(b, snr * 1.1) > r);
      CHECK(channel::uplink_rate(2.0 * b, snr) == doctest::Approx(2.0 * r).epsilon(1e-14));
      CHECK(channel::upload_latency(1e6, r * 1.01) < channel::upload_latency(1e6, r));
    }
  }
}

TEST_CASE("snapshot shape, clamp and determinism") {
  std::vector<UserState> users(2);
  users[0].position = {10.0, 10.0};
  users[1].position = {700.0, 300.0};
  std::vector<BaseStation> bss(2);
  bss[0].id = 0;
  bss[0].position = {10.0, 10.0};
  bss[1].id = 1;
  bss[1].position = {900.0, 900.0};

  auto s1 = derive_stream(1, StreamPurpose::fading, 0);
  auto s2 = derive_stream(1, StreamPurpose::fading, 0);
  const auto a = channel::snapshot(users, bss, s1);
  const auto b = channel::snapshot(users, bss, s2);
  CHECK(a == b);
  REQUIRE(a.gains.rows() == 2);
  REQUIRE(a.gains.cols() == 2);
  CHECK(a.distances(0, 0) == channel::kMinDistanceM);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(a.gains(i, k) > 0.0);
      CHECK(std::isfinite(a.gains(i, k)));
    }
  }
  CHECK(a.distances(1, 1) == doctest::Approx(std::hypot(200.0, 600.0)));
}

TEST_CASE("round snapshots are redrawn each round") {
  SimConfig c;
  std::vector<UserState> users(3);
  for (std::size_t i = 0; i < 3; ++i) {
    users[i].id = i;
    users[i].position = {100.0 * static_cast<double>(i + 1), 200.0};
  }
  const auto bss = channel::place_base_stations(c, channel::base_station_bandwidths(c));
  const auto r0 = channel::round_snapshot_serial(users, bss, 1, 0);
  const auto r1 = channel::round_snapshot_serial(users, bss, 1, 1);
  CHECK(r0.distances == r1.distances);
  CHECK(r0.gains != r1.gains);
}

TEST_CASE("base stations lie inside the area") {
  for (std::size_t m : {1u, 2u, 3u, 5u, 8u, 13u}) {
    SimConfig c;
    c.num_bs = m;
    const auto bw = channel::base_station_bandwidths(c);
    const auto bss = channel::place_base_stations(c, bw);
    REQUIRE(bss.size() == m);
    for (std::size_t k = 0; k < m; ++k) {
      CHECK(bss[k].id == k);
      CHECK(bss[k].position.x >= 0.0);
      CHECK(bss[k].position.x <= c.area_side_m);
      CHECK(bss[k].position.y >= 0.0);
      CHECK(bss[k].position.y <= c.area_side_m);
      CHECK(bss[k].bandwidth_mhz > 0.0);
    }
  }
}

TEST_CASE("heterogeneous bandwidths keep the total and the range") {
  SimConfig c;
  c.heterogeneous_bandwidth = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    c.master_seed = seed;
    const auto bw = channel::base_station_bandwidths(c);
    double total = 0.0;
    for (double b : bw) {
      CHECK(b > 0.0);
      total += b;
    }
    CHECK(total == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(bw != std::vector<double>(8, 1.0));
  }
}

}
