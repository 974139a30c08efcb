#include "flmob/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

extern char** environ;

namespace flmob {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("config key '" + key + "': not a finite number: '" + text + "'");
  }
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + key + "': not a non-negative integer: '" + text + "'");
  }
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + text + "'");
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"area_side_m", [](SimConfig& c, const std::string& k, const std::string& v) { c.area_side_m = parse_double(k, v); }},
      {"num_users", [](SimConfig& c, const std::string& k, const std::string& v) { c.num_users = parse_u64(k, v); }},
      {"num_bs", [](SimConfig& c, const std::string& k, const std::string& v) { c.num_bs = parse_u64(k, v); }},
      {"tx_psd_dbm_per_mhz", [](SimConfig& c, const std::string& k, const std::string& v) { c.tx_psd_dbm_per_mhz = parse_double(k, v); }},
      {"noise_psd_dbm_per_mhz", [](SimConfig& c, const std::string& k, const std::string& v) { c.noise_psd_dbm_per_mhz = parse_double(k, v); }},
      {"bs_bandwidth_mhz", [](SimConfig& c, const std::string& k, const std::string& v) { c.bs_bandwidth_mhz = parse_list(k, v); }},
      {"heterogeneous_bandwidth", [](SimConfig& c, const std::string& k, const std::string& v) { c.heterogeneous_bandwidth = parse_bool(k, v); }},
      {"model_size_bits", [](SimConfig& c, const std::string& k, const std::string& v) { c.model_size_bits = parse_double(k, v); }},
      {"comp_latency_range_s", [](SimConfig& c, const std::string& k, const std::string& v) {
         const auto r = parse_list(k, v);
         if (r.size() != 2) throw ConfigError("config key '" + k + "': expected two values 'min, max'");
         c.comp_latency_range_s = {r[0], r[1]};
       }},
      {"comp_latency_mode", [](SimConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "per-round") c.comp_latency_mode = CompLatencyMode::per_round;
         else if (t == "fixed-per-user") c.comp_latency_mode = CompLatencyMode::fixed_per_user;
         else throw ConfigError("config key '" + k + "': expected per-round | fixed-per-user");
       }},
      {"rho1", [](SimConfig& c, const std::string& k, const std::string& v) { c.rho1 = parse_double(k, v); }},
      {"rho2", [](SimConfig& c, const std::string& k, const std::string& v) { c.rho2 = parse_double(k, v); }},
      {"speed_mps", [](SimConfig& c, const std::string& k, const std::string& v) { c.speed_mps = parse_double(k, v); }},
      {"mobility_dt_mode", [](SimConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "fixed-period") c.mobility_dt_mode = MobilityDtMode::fixed_period;
         else if (t == "realized-previous-round") c.mobility_dt_mode = MobilityDtMode::realized_previous_round;
         else throw ConfigError("config key '" + k + "': expected fixed-period | realized-previous-round");
       }},
      {"mobility_period_s", [](SimConfig& c, const std::string& k, const std::string& v) { c.mobility_period_s = parse_double(k, v); }},
      {"local_epochs", [](SimConfig& c, const std::string& k, const std::string& v) { c.local_epochs = parse_u64(k, v); }},
      {"learning_rate", [](SimConfig& c, const std::string& k, const std::string& v) { c.learning_rate = parse_double(k, v); }},
      {"batch_size", [](SimConfig& c, const std::string& k, const std::string& v) { c.batch_size = parse_u64(k, v); }},
      {"shards_per_user", [](SimConfig& c, const std::string& k, const std::string& v) { c.shards_per_user = parse_u64(k, v); }},
      {"feature_dim", [](SimConfig& c, const std::string& k, const std::string& v) { c.feature_dim = parse_u64(k, v); }},
      {"train_samples", [](SimConfig& c, const std::string& k, const std::string& v) { c.train_samples = parse_u64(k, v); }},
      {"test_samples", [](SimConfig& c, const std::string& k, const std::string& v) { c.test_samples = parse_u64(k, v); }},
      {"class_separation", [](SimConfig& c, const std::string& k, const std::string& v) { c.class_separation = parse_double(k, v); }},
      {"feature_scale_min", [](SimConfig& c, const std::string& k, const std::string& v) { c.feature_scale_min = parse_double(k, v); }},
      {"feature_scale_max", [](SimConfig& c, const std::string& k, const std::string& v) { c.feature_scale_max = parse_double(k, v); }},
      {"master_seed", [](SimConfig& c, const std::string& k, const std::string& v) { c.master_seed = parse_u64(k, v); }},
  };
  return table;
}

}  // namespace

void SimConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(area_side_m > 0.0, "area_side_m must be > 0");
  require(num_users >= 1, "num_users must be >= 1");
  require(num_bs >= 1, "num_bs must be >= 1");
  require(bs_bandwidth_mhz.size() == 1 || bs_bandwidth_mhz.size() == num_bs,
          "bs_bandwidth_mhz must have 1 or num_bs entries");
  for (double b : bs_bandwidth_mhz) require(b > 0.0, "all bs_bandwidth_mhz must be > 0");
  require(model_size_bits > 0.0, "model_size_bits must be > 0");
  require(comp_latency_range_s[0] >= 0.0, "comp latency must be >= 0");
  require(comp_latency_range_s[0] <= comp_latency_range_s[1], "comp_latency_range_s needs min <= max");
  require(rho1 >= 0.0 && rho1 <= 1.0, "rho1 must be in [0, 1]");
  require(rho2 > 0.0 && rho2 <= 1.0, "rho2 must be in (0, 1]");
  require(speed_mps >= 0.0, "speed_mps must be >= 0");
  require(mobility_period_s >= 0.0, "mobility_period_s must be >= 0");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(shards_per_user >= 1, "shards_per_user must be >= 1");
  require(feature_dim >= 1, "feature_dim must be >= 1");
  require(train_samples >= 1 && test_samples >= 1, "sample counts must be >= 1");
  require(class_separation >= 0.0, "class_separation must be >= 0");
  require(feature_scale_min > 0.0 && feature_scale_min <= feature_scale_max,
          "feature scales need 0 < min <= max");
}

double SimConfig::bandwidth_mhz(std::size_t bs) const {
  return bs_bandwidth_mhz.size() == 1 ? bs_bandwidth_mhz.front() : bs_bandwidth_mhz.at(bs);
}

void apply_config_value(SimConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(lower(trim(key)));
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, it->first, value);
}

void apply_config_text(SimConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_config_value(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  SimConfig config;
  apply_config_text(config, buffer.str());
  return config;
}

void apply_env_overrides(SimConfig& config, const std::map<std::string, std::string>& env) {
  static const std::string prefix = "FLMOB_";
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0) continue;
    apply_config_value(config, name.substr(prefix.size()), value);
  }
}

std::map<std::string, std::string> flmob_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string entry(*e);
    if (entry.rfind("FLMOB_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    out[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return out;
}

std::string to_string(MobilityDtMode mode) {
  return mode == MobilityDtMode::fixed_period ? "fixed-period" : "realized-previous-round";
}

std::string to_string(CompLatencyMode mode) {
  return mode == CompLatencyMode::per_round ? "per-round" : "fixed-per-user";
}

std::string to_config_text(const SimConfig& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  auto list = [&](const auto& values) {
    std::string sep;
    for (double v : values) {
      out << sep << v;
      sep = ", ";
    }
  };
  out << "area_side_m = " << c.area_side_m << '\n'
      << "num_users = " << c.num_users << '\n'
      << "num_bs = " << c.num_bs << '\n'
      << "tx_psd_dbm_per_mhz = " << c.tx_psd_dbm_per_mhz << '\n'
      << "noise_psd_dbm_per_mhz = " << c.noise_psd_dbm_per_mhz << '\n'
      << "bs_bandwidth_mhz = ";
  list(c.bs_bandwidth_mhz);
  out << '\n'
      << "heterogeneous_bandwidth = " << (c.heterogeneous_bandwidth ? "true" : "false") << '\n'
      << "model_size_bits = " << c.model_size_bits << '\n'
      << "comp_latency_range_s = ";
  list(c.comp_latency_range_s);
  out << '\n'
      << "comp_latency_mode = " << to_string(c.comp_latency_mode) << '\n'
      << "rho1 = " << c.rho1 << '\n'
      << "rho2 = " << c.rho2 << '\n'
      << "speed_mps = " << c.speed_mps << '\n'
      << "mobility_dt_mode = " << to_string(c.mobility_dt_mode) << '\n'
      << "mobility_period_s = " << c.mobility_period_s << '\n'
      << "local_epochs = " << c.local_epochs << '\n'
      << "learning_rate = " << c.learning_rate << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "shards_per_user = " << c.shards_per_user << '\n'
      << "feature_dim = " << c.feature_dim << '\n'
      << "train_samples = " << c.train_samples << '\n'
      << "test_samples = " << c.test_samples << '\n'
      << "class_separation = " << c.class_separation << '\n'
      << "feature_scale_min = " << c.feature_scale_min << '\n'
      << "feature_scale_max = " << c.feature_scale_max << '\n'
      << "master_seed = " << c.master_seed << '\n';
  return out.str();
}

}  // namespace flmob
