#include "doctest.h"

#include <cmath>
#include <numbers>

#include "flmob/mobility.hpp"
#include "flmob/simulation.hpp"
#include "support/oracles.hpp"

using namespace flmob;
using std::numbers::pi;

TEST_SUITE("mobility") {

TEST_CASE("overshoot past the right wall folds back") {
  UserState u;
  u.position = {995.0, 500.0};
  const auto next = mobility::step_with_heading(u, 0.0, 20.0, 1.0, 1000.0);
  CHECK(next.position.x == doctest::Approx(985.0).epsilon(1e-12));
  CHECK(next.position.y == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(next.heading == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("zero speed leaves the position unchanged") {
  UserState u;
  u.position = {123.0, 456.0};
  auto s = derive_stream(1, StreamPurpose::mobility, 0);
  for (double dt : {0.0, 1.0, 1e6}) {
    const auto next = mobility::step(u, 0.0, dt, 1000.0, s);
    CHECK(next.position.x == 123.0);
    CHECK(next.position.y == 456.0);
  }
}

TEST_CASE("corner bounce matches sub-stepping and keeps the path length") {
  const auto t = mobility::advance({2.0, 2.0}, 5.0 * pi / 4.0, 20.0, 1000.0);
  const auto ref = oracle::substep_walk({2.0, 2.0}, 5.0 * pi / 4.0, 20.0, 1000.0, 1e-3);
  CHECK(std::abs(t.position.x - ref.x) < 1e-6);
  CHECK(std::abs(t.position.y - ref.y) < 1e-6);
  CHECK(std::abs(t.path_length - 20.0) < 1e-9);
  CHECK(t.reflections >= 1);
  CHECK(t.position.x >= 0.0);
  CHECK(t.position.y >= 0.0);
}

TEST_CASE("many reflections in one step") {
  // 10.5 side lengths along x: ends mirrored at x = 500 + ... folded.
  const auto t = mobility::advance({100.0, 300.0}, 0.3, 10500.0, 1000.0);
  const auto ref = oracle::unfolded_walk({100.0, 300.0}, 0.3, 10500.0, 1000.0);
  CHECK(t.position.x == doctest::Approx(ref.x).epsilon(1e-9));
  CHECK(t.position.y == doctest::Approx(ref.y).epsilon(1e-9));
  CHECK(std::abs(t.path_length - 10500.0) < 1e-9 * 10500.0);
  CHECK(t.reflections > 10);
}

TEST_CASE("axis-aligned and wall-hugging moves") {
  auto t = mobility::advance({0.0, 0.0}, 0.0, 30.0, 1000.0);
  CHECK(t.position.x == doctest::Approx(30.0));
  CHECK(t.position.y == 0.0);
  t = mobility::advance({1000.0, 500.0}, pi / 2.0, 700.0, 1000.0);
  CHECK(t.position.x == doctest::Approx(1000.0));
  CHECK(t.position.y == doctest::Approx(800.0));
  t = mobility::advance({0.0, 0.0}, pi / 4.0, 2000.0 * std::sqrt(2.0), 1000.0);
  CHECK(t.position.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(t.position.y == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("random steps stay inside and match the closed-form unfolding") {
  auto s = derive_stream(3, StreamPurpose::mobility, 0);
  for (int i = 0; i < 2000; ++i) {
    const Position p{s.uniform(0.0, 1000.0), s.uniform(0.0, 1000.0)};
    const double h = s.uniform(0.0, 2.0 * pi);
    const double d = s.uniform(0.0, 3000.0);
    const auto t = mobility::advance(p, h, d, 1000.0);
    const auto ref = oracle::unfolded_walk({p.x, p.y}, h, d, 1000.0);
    REQUIRE(t.position.x >= 0.0);
    REQUIRE(t.position.x <= 1000.0);
    REQUIRE(t.position.y >= 0.0);
    REQUIRE(t.position.y <= 1000.0);
    CHECK(std::abs(t.position.x - ref.x) < 1e-7);
    CHECK(std::abs(t.position.y - ref.y) < 1e-7);
    CHECK(std::abs(t.path_length - d) <= 1e-9);
    CHECK(t.heading >= 0.0);
    CHECK(t.heading < 2.0 * pi);
  }
}

TEST_CASE("round_dt modes") {
  SimConfig c;
  CHECK(mobility::round_dt(c, std::nullopt) == 1.0);
  CHECK(mobility::round_dt(c, 0.73) == 1.0);
  c.mobility_dt_mode = MobilityDtMode::realized_previous_round;
  CHECK(mobility::round_dt(c, 0.73) == 0.73);
  CHECK(mobility::round_dt(c, std::nullopt) == 1.0);
}

TEST_CASE("same stream, same trajectory") {
  SimConfig c;
  auto a = place_users(c);
  auto b = a;
  for (std::uint64_t r = 0; r < 20; ++r) {
    mobility::step_all_serial(a, c, 1.0, r);
    mobility::step_all_serial(b, c, 1.0, r);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position.x == b[i].position.x);
    CHECK(a[i].position.y == b[i].position.y);
  }
}

TEST_CASE("step draws headings uniformly") {
  UserState u;
  u.position = {500.0, 500.0};
  std::vector<std::size_t> bins(8, 0);
  auto s = derive_stream(11, StreamPurpose::mobility, 0);
  for (int i = 0; i < 80000; ++i) {
    const auto next = mobility::step(u, 1.0, 1.0, 1000.0, s);
    const double a = std::atan2(next.position.y - 500.0, next.position.x - 500.0);
    const double h = a < 0.0 ? a + 2.0 * pi : a;
    ++bins[std::min<std::size_t>(7, static_cast<std::size_t>(h / (pi / 4.0)))];
  }
  for (auto b : bins) CHECK(static_cast<double>(b) == doctest::Approx(10000.0).epsilon(0.05));
}

}
