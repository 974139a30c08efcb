#include "flmob/fl_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace flmob::fl {

ModelParams ModelParams::zeros(std::size_t num_classes, std::size_t dim) {
  ModelParams m;
  m.num_classes = num_classes;
  m.dim = dim;
  m.weights.assign(num_classes * dim, 0.0);
  m.biases.assign(num_classes, 0.0);
  return m;
}

namespace {

void shuffle(std::vector<std::size_t>& v, RandomStream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[stream.index(i)]);
  }
}

// logits -> probabilities in place, returns log-sum-exp.
double softmax_inplace(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return top + std::log(sum);
}

void logits(const ModelParams& model, std::span<const double> x, std::span<double> out) {
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    const double* w = model.weights.data() + c * model.dim;
    double acc = model.biases[c];
    for (std::size_t d = 0; d < model.dim; ++d) acc += w[d] * x[d];
    out[c] = acc;
  }
}

Dataset empty_like(std::size_t dim, std::size_t classes) {
  Dataset d;
  d.dim = dim;
  d.num_classes = classes;
  return d;
}

void check_partition_size(std::size_t total, std::size_t parts) {
  if (parts == 0 || total % parts != 0) {
    throw ConfigError("dataset of " + std::to_string(total) + " samples cannot be split into " +
                      std::to_string(parts) + " equal shards");
  }
}

}  // namespace

SyntheticData generate_synthetic(const SimConfig& config, RandomStream& stream) {
  const std::size_t dim = config.feature_dim;
  SyntheticData out;
  out.centers.resize(kNumClasses * dim);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    double norm = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double v = stream.normal();
      out.centers[c * dim + d] = v;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (std::size_t d = 0; d < dim; ++d) {
      out.centers[c * dim + d] *= config.class_separation / norm;
    }
  }

  out.feature_scales.resize(dim);
  const double lo = std::log(config.feature_scale_min);
  const double hi = std::log(config.feature_scale_max);
  for (std::size_t d = 0; d < dim; ++d) {
    const double frac = dim > 1 ? static_cast<double>(d) / static_cast<double>(dim - 1) : 0.0;
    out.feature_scales[d] = std::exp(hi + (lo - hi) * frac);
  }

  auto sample = [&](std::size_t count) {
    Dataset data = empty_like(dim, kNumClasses);
    data.features.reserve(count * dim);
    data.labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto label = static_cast<int>(i % kNumClasses);
      data.labels.push_back(label);
      for (std::size_t d = 0; d < dim; ++d) {
        const double clean = out.centers[static_cast<std::size_t>(label) * dim + d];
        data.features.push_back(out.feature_scales[d] * (clean + stream.normal()));
      }
    }
    return data;
  };
  out.train = sample(config.train_samples);
  out.test = sample(config.test_samples);
  return out;
}

std::vector<IndexSet> partition_noniid(const Dataset& data, std::size_t num_users,
                                       std::size_t shards_per_user, RandomStream& stream) {
  const std::size_t num_shards = num_users * shards_per_user;
  check_partition_size(data.size(), num_shards);
  const std::size_t shard_size = data.size() / num_shards;

  IndexSet order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data.labels[a] < data.labels[b]; });

  std::vector<std::size_t> shards(num_shards);
  std::iota(shards.begin(), shards.end(), 0);
  shuffle(shards, stream);

  std::vector<IndexSet> out(num_users);
  for (std::size_t u = 0; u < num_users; ++u) {
    for (std::size_t s = 0; s < shards_per_user; ++s) {
      const std::size_t shard = shards[u * shards_per_user + s];
      const auto first = order.begin() + static_cast<std::ptrdiff_t>(shard * shard_size);
      out[u].insert(out[u].end(), first, first + static_cast<std::ptrdiff_t>(shard_size));
    }
  }
  return out;
}

std::vector<IndexSet> partition_iid(const Dataset& data, std::size_t num_users, RandomStream& stream) {
  check_partition_size(data.size(), num_users);
  const std::size_t per_user = data.size() / num_users;
  IndexSet order(data.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, stream);
  std::vector<IndexSet> out(num_users);
  for (std::size_t u = 0; u < num_users; ++u) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(u * per_user);
    out[u].assign(first, first + static_cast<std::ptrdiff_t>(per_user));
  }
  return out;
}

LossGradient loss_and_gradient(const ModelParams& model, const Dataset& data,
                               std::span<const std::size_t> indices) {
  LossGradient out{0.0, ModelParams::zeros(model.num_classes, model.dim)};
  if (indices.empty()) return out;
  std::vector<double> p(model.num_classes);
  for (std::size_t idx : indices) {
    const auto x = data.row(idx);
    const auto y = static_cast<std::size_t>(data.labels[idx]);
    logits(model, x, p);
    const double z_y = p[y];
    out.loss += softmax_inplace(p) - z_y;
    p[y] -= 1.0;
    for (std::size_t c = 0; c < model.num_classes; ++c) {
      double* g = out.gradient.weights.data() + c * model.dim;
      for (std::size_t d = 0; d < model.dim; ++d) g[d] += p[c] * x[d];
      out.gradient.biases[c] += p[c];
    }
  }
  const double scale = 1.0 / static_cast<double>(indices.size());
  out.loss *= scale;
  for (double& g : out.gradient.weights) g *= scale;
  for (double& g : out.gradient.biases) g *= scale;
  return out;
}

double loss(const ModelParams& model, const Dataset& data, std::span<const std::size_t> indices) {
  if (indices.empty()) return 0.0;
  std::vector<double> z(model.num_classes);
  double total = 0.0;
  for (std::size_t idx : indices) {
    logits(model, data.row(idx), z);
    const double z_y = z[static_cast<std::size_t>(data.labels[idx])];
    total += softmax_inplace(z) - z_y;
  }
  return total / static_cast<double>(indices.size());
}

ModelParams local_train(const ModelParams& model, const Dataset& data,
                        std::span<const std::size_t> indices, const TrainOptions& options,
                        RandomStream& stream) {
  ModelParams w = model;
  if (indices.empty() || options.epochs == 0) return w;
  if (!(options.learning_rate > 0.0) || options.batch_size == 0) {
    throw std::invalid_argument("local_train: learning rate and batch size must be positive");
  }
  std::vector<std::size_t> order(indices.begin(), indices.end());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle(order, stream);
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t len = std::min(options.batch_size, order.size() - start);
      const auto grad = loss_and_gradient(w, data, std::span(order).subspan(start, len));
      for (std::size_t j = 0; j < w.weights.size(); ++j) {
        w.weights[j] -= options.learning_rate * grad.gradient.weights[j];
      }
      for (std::size_t c = 0; c < w.biases.size(); ++c) {
        w.biases[c] -= options.learning_rate * grad.gradient.biases[c];
      }
    }
  }
  return w;
}

ModelParams aggregate(std::span<const LocalUpdate> updates) {
  double total = 0.0;
  const ModelParams* shape = nullptr;
  for (const auto& u : updates) {
    if (!u.selected) continue;
    total += static_cast<double>(u.data_size);
    shape = &u.params.get();
  }
  if (shape == nullptr || !(total > 0.0)) {
    throw std::invalid_argument("aggregate: no selected users with data");
  }
  ModelParams out = ModelParams::zeros(shape->num_classes, shape->dim);
  for (const auto& u : updates) {
    if (!u.selected) continue;
    const ModelParams& p = u.params.get();
    const double weight = static_cast<double>(u.data_size) / total;
    for (std::size_t j = 0; j < out.weights.size(); ++j) out.weights[j] += weight * p.weights[j];
    for (std::size_t c = 0; c < out.biases.size(); ++c) out.biases[c] += weight * p.biases[c];
  }
  // A convex combination of equal values is that value; keep it free of
  // rounding so that a converged model is a fixed point.
  auto pin_agreeing = [&](std::vector<double> ModelParams::*field) {
    std::vector<double>& dst = out.*field;
    for (std::size_t j = 0; j < dst.size(); ++j) {
      bool same = true;
      for (const auto& u : updates) {
        if (u.selected && (u.params.get().*field)[j] != (shape->*field)[j]) {
          same = false;
          break;
        }
      }
      if (same) dst[j] = (shape->*field)[j];
    }
  };
  pin_agreeing(&ModelParams::weights);
  pin_agreeing(&ModelParams::biases);
  return out;
}

int predict(const ModelParams& model, std::span<const double> x) {
  std::vector<double> z(model.num_classes);
  logits(model, x, z);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

double evaluate(const ModelParams& model, const Dataset& test) {
  if (test.size() == 0) return 0.0;
  const auto n = static_cast<std::ptrdiff_t>(test.size());
  std::ptrdiff_t correct = 0;
#pragma omp parallel for reduction(+ : correct) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    if (predict(model, test.row(row)) == test.labels[row]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

double evaluate_serial(const ModelParams& model, const Dataset& test) {
  if (test.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (predict(model, test.row(i)) == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<ModelParams> train_users(const ModelParams& global, const Dataset& data,
                                     std::span<const IndexSet> partitions,
                                     std::span<const std::size_t> users, const TrainOptions& options,
                                     std::uint64_t master_seed, std::uint64_t round) {
  std::vector<ModelParams> out(users.size());
  const auto n = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const std::size_t user = users[static_cast<std::size_t>(j)];
    RandomStream stream = derive_stream(master_seed, StreamPurpose::shuffle, round, user);
    out[static_cast<std::size_t>(j)] = local_train(global, data, partitions[user], options, stream);
  }
  return out;
}

std::vector<ModelParams> train_users_serial(const ModelParams& global, const Dataset& data,
                                            std::span<const IndexSet> partitions,
                                            std::span<const std::size_t> users,
                                            const TrainOptions& options, std::uint64_t master_seed,
                                            std::uint64_t round) {
  std::vector<ModelParams> out;
  out.reserve(users.size());
  for (std::size_t user : users) {
    RandomStream stream = derive_stream(master_seed, StreamPurpose::shuffle, round, user);
    out.push_back(local_train(global, data, partitions[user], options, stream));
  }
  return out;
}

Dataset read_csv_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset: missing header");
  Dataset data;
  {
    std::stringstream header(line);
    std::string f, k;
    if (!std::getline(header, f, ',') || !std::getline(header, k)) {
      throw ConfigError("dataset: header must be 'F,num_classes'");
    }
    try {
      data.dim = std::stoul(f);
      data.num_classes = std::stoul(k);
    } catch (const std::exception&) {
      throw ConfigError("dataset: header must be 'F,num_classes'");
    }
    if (data.dim == 0 || data.num_classes == 0) throw ConfigError("dataset: empty shape in header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    try {
      while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("dataset line " + std::to_string(line_no) + ": not a number");
    }
    if (values.size() != data.dim + 1) {
      throw ConfigError("dataset line " + std::to_string(line_no) + ": expected " +
                        std::to_string(data.dim + 1) + " fields");
    }
    const double label = values.back();
    if (label < 0 || label >= static_cast<double>(data.num_classes) || label != std::floor(label)) {
      throw ConfigError("dataset line " + std::to_string(line_no) + ": bad label");
    }
    data.features.insert(data.features.end(), values.begin(), values.end() - 1);
    data.labels.push_back(static_cast<int>(label));
  }
  return data;
}

Dataset load_csv_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read dataset '" + path + "'");
  return read_csv_dataset(in);
}

void write_csv_dataset(std::ostream& out, const Dataset& data) {
  out << data.dim << ',' << data.num_classes << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out << v << ',';
    out << data.labels[i] << '\n';
  }
}

}  // namespace flmob::fl
