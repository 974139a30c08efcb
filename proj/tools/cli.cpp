#include "cli.hpp"

#include <charconv>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "flmob/config.hpp"
#include "flmob/experiment.hpp"
#include "flmob/scheduler.hpp"
#include "flmob/simulation.hpp"

namespace flmob::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split(text, ',')) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("bad seed '" + s + "'");
    }
    seeds.push_back(v);
  }
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

std::vector<scheduler::Policy> parse_policies(const std::string& text) {
  std::vector<scheduler::Policy> out;
  for (const auto& name : split(text, ',')) {
    if (name == "all") {
      for (auto p : scheduler::all_policies()) out.push_back(p);
      continue;
    }
    const auto p = scheduler::parse_policy(name);
    if (!p) throw ConfigError("unknown policy '" + name + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw ConfigError("no policy given");
  return out;
}

// Precedence: defaults < config file < FLMOB_* environment < --set.
SimConfig build_config(const std::string& path, const std::map<std::string, std::string>& env,
                       const std::vector<std::string>& sets) {
  SimConfig config = path.empty() ? SimConfig{} : load_config_file(path);
  apply_env_overrides(config, env);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.validate();
  return config;
}

json schedule_json(const Schedule& s) {
  json bss = json::array();
  for (const auto& users : s.assignments) bss.push_back(users);
  return {{"round_latency_s", s.round_latency},
          {"per_bs_latency_s", s.per_bs_latency},
          {"assignments", bss}};
}

}  // namespace

int run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated learning over a mobile multi-BS wireless network"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file")->required();
    cmd->add_option("--set", sets, "override a config key (key=value), repeatable");
  };

  auto* simulate = app.add_subcommand("simulate", "run seeds x policies and write CSV + summary");
  add_config(simulate);
  std::string policy_text, seed_text, out_path, train_path, test_path;
  std::size_t rounds = 0;
  std::optional<double> budget;
  bool iid = false;
  simulate->add_option("--policy", policy_text, "dagsa|rs|ub|fedcs-low|fedcs-high|sa, comma list or 'all'")
      ->required();
  simulate->add_option("--rounds", rounds, "rounds per run (0: until the time budget)")->required();
  simulate->add_option("--time-budget", budget, "simulated seconds");
  simulate->add_option("--seed", seed_text, "master seed(s), comma separated")->required();
  simulate->add_option("--out", out_path, "CSV output path")->required();
  simulate->add_option("--train-data", train_path, "CSV training set instead of synthetic data");
  simulate->add_option("--test-data", test_path, "CSV test set");
  simulate->add_flag("--iid", iid, "IID partition instead of label shards");

  auto* sweep = app.add_subcommand("sweep", "run one experiment family");
  add_config(sweep);
  std::string experiment_name, out_dir;
  std::string sweep_seeds = "1,2,3,4,5";
  std::size_t calibration_rounds = experiment::SweepOptions{}.calibration_rounds;
  std::optional<double> sweep_budget;
  sweep->add_option("--experiment", experiment_name, "policies|hetero-bw|mobility")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--seeds", sweep_seeds, "master seeds, comma separated");
  sweep->add_option("--calibration-rounds", calibration_rounds, "DAGSA rounds used to fix the budget");
  sweep->add_option("--time-budget", sweep_budget, "fixed budget; skips calibration");

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum vs DAGSA on one instance");
  add_config(oracle);
  std::size_t oracle_users = 0, oracle_bs = 0;
  std::uint64_t oracle_seed = 0;
  oracle->add_option("--users", oracle_users)->required();
  oracle->add_option("--bs", oracle_bs)->required();
  oracle->add_option("--seed", oracle_seed)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      experiment::ExperimentSpec spec;
      spec.config = build_config(config_path, env, sets);
      spec.policies = parse_policies(policy_text);
      spec.num_rounds = rounds;
      spec.time_budget_s = budget;
      spec.seeds = parse_seeds(seed_text);
      spec.output_path = out_path;
      SimulationOptions options;
      options.partition = iid ? PartitionMode::iid : PartitionMode::noniid;
      if (train_path.empty() != test_path.empty()) {
        throw ConfigError("--train-data and --test-data go together");
      }
      if (!train_path.empty()) {
        options.train = fl::load_csv_dataset(train_path);
        options.test = fl::load_csv_dataset(test_path);
      }
      const auto cells = experiment::run_experiment(spec, options);
      out << experiment::summarize(cells, budget).dump(2) << '\n';
    } else if (sweep->parsed()) {
      const auto kind = experiment::parse_sweep(experiment_name);
      if (!kind) throw ConfigError("unknown experiment '" + experiment_name + "'");
      experiment::SweepOptions options;
      options.seeds = parse_seeds(sweep_seeds);
      options.calibration_rounds = calibration_rounds;
      options.time_budget_s = sweep_budget;
      const auto outputs =
          experiment::run_sweep(*kind, build_config(config_path, env, sets), out_dir, options);
      json files = json::array();
      for (const auto& o : outputs) files.push_back(o.name + ".csv");
      out << json{{"out_dir", out_dir}, {"files", files}}.dump(2) << '\n';
    } else if (oracle->parsed()) {
      SimConfig config = build_config(config_path, env, sets);
      config.num_users = oracle_users;
      config.num_bs = oracle_bs;
      config.master_seed = oracle_seed;
      config.validate();
      const auto input = make_instance(resolve_config(config));
      experiment::OracleResult best;
      try {
        best = experiment::oracle_solve(input, config.rho2);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const Schedule greedy = scheduler::dagsa(input);
      out << json{{"users", oracle_users},
                  {"bs", oracle_bs},
                  {"seed", oracle_seed},
                  {"feasible_schedules", best.feasible_count},
                  {"oracle", schedule_json(best.schedule)},
                  {"dagsa", schedule_json(greedy)},
                  {"latency_ratio", greedy.round_latency / best.latency}}
                 .dump(2)
          << '\n';
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const experiment::IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace flmob::cli
