#include "flmob/types.hpp"

#include <algorithm>
#include <cmath>

namespace flmob {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::size_t Schedule::num_selected() const {
  std::size_t n = 0;
  for (const auto& users : assignments) n += users.size();
  return n;
}

std::vector<UserId> Schedule::selected() const {
  std::vector<UserId> out;
  for (const auto& users : assignments) out.insert(out.end(), users.begin(), users.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool Schedule::is_selected(UserId user) const {
  return std::any_of(assignments.begin(), assignments.end(), [&](const auto& users) {
    return std::find(users.begin(), users.end(), user) != users.end();
  });
}

}  // namespace flmob
