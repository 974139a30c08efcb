#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flmob/config.hpp"
#include "flmob/rng.hpp"

namespace flmob::fl {

inline constexpr std::size_t kNumClasses = 10;

/// Row-major feature table with integer labels.
struct Dataset {
  std::size_t dim = 0;
  std::size_t num_classes = kNumClasses;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  /// Class means before feature scaling, num_classes x dim row-major.
  std::vector<double> centers;
  /// Per-feature scale applied to every sample (mean and noise alike).
  std::vector<double> feature_scales;
};

/// Softmax-regression parameters: logits = W x + b.
struct ModelParams {
  std::size_t num_classes = kNumClasses;
  std::size_t dim = 0;
  std::vector<double> weights;  // num_classes x dim, row-major
  std::vector<double> biases;   // num_classes

  static ModelParams zeros(std::size_t num_classes, std::size_t dim);
  bool operator==(const ModelParams&) const = default;
};

using IndexSet = std::vector<std::size_t>;

/// Gaussian blobs: one random unit direction per class scaled by
/// config.class_separation, unit isotropic noise, balanced classes. Feature
/// j of every sample is then multiplied by a fixed scale, log-spaced over
/// [feature_scale_min, feature_scale_max]; the scaling leaves the Bayes error
/// unchanged but makes gradient descent converge over many steps.
SyntheticData generate_synthetic(const SimConfig& config, RandomStream& stream);

/// Sort by label, cut into num_users * shards_per_user equal shards and deal
/// them at random. Throws ConfigError unless the shard size divides evenly.
std::vector<IndexSet> partition_noniid(const Dataset& data, std::size_t num_users,
                                       std::size_t shards_per_user, RandomStream& stream);

/// Random equal-size split; same divisibility rule as partition_noniid().
std::vector<IndexSet> partition_iid(const Dataset& data, std::size_t num_users,
                                    RandomStream& stream);

struct LossGradient {
  double loss = 0.0;
  ModelParams gradient;
};

/// Mean cross-entropy over `indices` and its gradient.
LossGradient loss_and_gradient(const ModelParams& model, const Dataset& data,
                               std::span<const std::size_t> indices);

double loss(const ModelParams& model, const Dataset& data, std::span<const std::size_t> indices);

struct TrainOptions {
  std::size_t epochs = 10;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
};

/// Mini-batch gradient descent, reshuffling the samples each epoch.
ModelParams local_train(const ModelParams& model, const Dataset& data,
                        std::span<const std::size_t> indices, const TrainOptions& options,
                        RandomStream& stream);

struct LocalUpdate {
  std::reference_wrapper<const ModelParams> params;
  std::size_t data_size = 0;
  bool selected = false;
};

/// Data-size weighted average over the selected updates.
/// Throws std::invalid_argument when nothing is selected.
ModelParams aggregate(std::span<const LocalUpdate> updates);

/// Class with the largest logit; lowest class id on ties.
int predict(const ModelParams& model, std::span<const double> x);

/// Fraction of samples classified correctly. Parallel over samples.
double evaluate(const ModelParams& model, const Dataset& test);

/// Reference implementation of evaluate().
double evaluate_serial(const ModelParams& model, const Dataset& test);

/// Broadcast `global` to every listed user and train each on its own data
/// with a stream derived from (seed, shuffle, round, user). Parallel over
/// users; results are in `users` order.
std::vector<ModelParams> train_users(const ModelParams& global, const Dataset& data,
                                     std::span<const IndexSet> partitions,
                                     std::span<const std::size_t> users,
                                     const TrainOptions& options, std::uint64_t master_seed,
                                     std::uint64_t round);

/// Reference implementation of train_users().
std::vector<ModelParams> train_users_serial(const ModelParams& global, const Dataset& data,
                                            std::span<const IndexSet> partitions,
                                            std::span<const std::size_t> users,
                                            const TrainOptions& options,
                                            std::uint64_t master_seed, std::uint64_t round);

/// Reads a CSV table: header `F,num_classes`, then one sample per line with
/// F feature values followed by the integer label. Throws ConfigError on
/// malformed input.
Dataset read_csv_dataset(std::istream& in);
Dataset load_csv_dataset(const std::string& path);

void write_csv_dataset(std::ostream& out, const Dataset& data);

}  // namespace flmob::fl
