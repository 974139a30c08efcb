#pragma once

#include <cstddef>
#include <vector>

namespace flmob {

using UserId = std::size_t;
using BsId = std::size_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct UserState {
  UserId id = 0;
  Position position;
  /// Direction of travel, radians in [0, 2*pi).
  double heading = 0.0;
  double comp_latency_s = 0.0;
  std::size_t participation_count = 0;
};

struct BaseStation {
  BsId id = 0;
  Position position;
  double bandwidth_mhz = 1.0;
};

/// Per-round channel state for every user/BS pair.
struct ChannelSnapshot {
  /// Linear power gains |h|^2, users x BSs, path loss and fading combined.
  Matrix gains;
  /// Users x BSs, meters (after the minimum-distance clamp).
  Matrix distances;

  std::size_t num_users() const { return gains.rows(); }
  std::size_t num_bs() const { return gains.cols(); }
  bool operator==(const ChannelSnapshot&) const = default;
};

/// One round's selection, BS assignment and bandwidth split.
struct Schedule {
  /// assignments[k] holds the users served by BS k in ascending id order.
  std::vector<std::vector<UserId>> assignments;
  /// Allocated bandwidth per user in MHz; zero for unselected users.
  std::vector<double> bandwidth_mhz;
  /// Optimal (or even-split) completion time of each BS; zero when idle.
  std::vector<double> per_bs_latency;
  double round_latency = 0.0;

  std::size_t num_selected() const;
  std::vector<UserId> selected() const;
  bool is_selected(UserId user) const;
  bool operator==(const Schedule&) const = default;
};

/// Cumulative participation history used by the fairness constraint.
struct FairnessLedger {
  std::vector<std::size_t> counts;
  std::size_t round_index = 0;

  explicit FairnessLedger(std::size_t num_users = 0) : counts(num_users, 0) {}
};

struct RoundRecord {
  std::size_t round_index = 0;
  Schedule schedule;
  double accuracy = 0.0;
  double cumulative_time_s = 0.0;
  std::vector<std::size_t> participation_counts;
};

}  // namespace flmob
