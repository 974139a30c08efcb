#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace flmob {

/// Raised for malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MobilityDtMode { fixed_period, realized_previous_round };
enum class CompLatencyMode { per_round, fixed_per_user };

/// All physical, protocol and learning constants of one simulation.
///
/// Field names double as the keys of the flat config file format.
struct SimConfig {
  double area_side_m = 1000.0;
  std::size_t num_users = 50;
  std::size_t num_bs = 8;
  double tx_psd_dbm_per_mhz = 14.0;
  double noise_psd_dbm_per_mhz = -114.0;
  /// One entry per BS. A single entry is broadcast to all BSs.
  std::vector<double> bs_bandwidth_mhz = {1.0};
  /// Redraw B_k from U[0.5, 1.5] MHz, rescaled to the configured total.
  bool heterogeneous_bandwidth = false;
  double model_size_bits = 1.0e6;
  /// [t_min, t_max] of the uniform compute-latency draw, seconds.
  std::array<double, 2> comp_latency_range_s = {0.10, 0.11};
  CompLatencyMode comp_latency_mode = CompLatencyMode::per_round;
  double rho1 = 0.1;
  double rho2 = 0.3;
  double speed_mps = 20.0;
  MobilityDtMode mobility_dt_mode = MobilityDtMode::fixed_period;
  double mobility_period_s = 1.0;
  std::size_t local_epochs = 10;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t shards_per_user = 2;
  std::size_t feature_dim = 32;
  std::size_t train_samples = 10000;
  std::size_t test_samples = 2000;
  double class_separation = 3.5;
  /// Per-feature scale factors applied to the synthetic blobs, log-spaced
  /// from max (feature 0) down to min. Equal values give isotropic data.
  double feature_scale_min = 0.2;
  double feature_scale_max = 4.0;
  std::uint64_t master_seed = 1;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  /// B_k for BS k, honoring single-value broadcast.
  double bandwidth_mhz(std::size_t bs) const;
};

/// Applies one `key = value` assignment. Throws ConfigError on unknown keys
/// or unparsable values.
void apply_config_value(SimConfig& config, const std::string& key,
                        const std::string& value);

/// Parses the flat key-value format (`#` starts a comment) into `config`.
void apply_config_text(SimConfig& config, const std::string& text);

/// Reads a config file. Throws ConfigError if the file cannot be read.
SimConfig load_config_file(const std::string& path);

/// Applies every `FLMOB_<KEY>` variable found in `env` (keys are matched
/// case-insensitively against field names).
void apply_env_overrides(SimConfig& config,
                         const std::map<std::string, std::string>& env);

/// Snapshot of the process environment restricted to FLMOB_ variables.
std::map<std::string, std::string> flmob_environment();

/// Serializes back to the key-value format; parsing the result reproduces
/// the same config.
std::string to_config_text(const SimConfig& config);

std::string to_string(MobilityDtMode mode);
std::string to_string(CompLatencyMode mode);

}  // namespace flmob
