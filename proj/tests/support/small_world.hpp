#pragma once

#include "flmob/config.hpp"

namespace testing {

/// A world small enough for end-to-end tests to run in milliseconds.
inline flmob::SimConfig small_world(std::size_t users = 10, std::size_t bss = 2) {
  flmob::SimConfig c;
  c.num_users = users;
  c.num_bs = bss;
  c.train_samples = 100 * users;
  c.test_samples = 200;
  c.local_epochs = 2;
  return c;
}

}  // namespace testing
