#include "flmob/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "flmob/bandwidth.hpp"
#include "flmob/channel.hpp"

namespace flmob::experiment {

namespace {

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

const std::vector<double> kAccuracyTargets = {0.5, 0.6, 0.7, 0.8, 0.85, 0.9};

}  // namespace

void ExperimentSpec::validate() const {
  config.validate();
  if (num_rounds == 0 && !time_budget_s) {
    throw ConfigError("experiment needs a round count or a time budget");
  }
  if (time_budget_s && !(*time_budget_s > 0.0)) throw ConfigError("time budget must be > 0");
  if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
  if (policies.empty()) throw ConfigError("experiment needs at least one policy");
}

CellResult run_cell(const SimConfig& config, scheduler::Policy policy, std::uint64_t seed,
                    std::size_t num_rounds, std::optional<double> time_budget_s,
                    const SimulationOptions& options) {
  SimConfig cell_config = config;
  cell_config.master_seed = seed;
  Simulation sim(cell_config, options);

  CellResult cell;
  cell.seed = seed;
  cell.policy = policy;
  cell.initial_accuracy = sim.initial_accuracy();
  const std::size_t limit = num_rounds > 0 ? num_rounds : kMaxRounds;
  for (std::size_t r = 0; r < limit; ++r) {
    cell.records.push_back(sim.run_round(policy));
    if (time_budget_s && sim.cumulative_time() > *time_budget_s) break;
  }
  return cell;
}

std::vector<CellResult> run_cells(const ExperimentSpec& spec, const SimulationOptions& options) {
  spec.validate();
  const std::size_t np = spec.policies.size();
  std::vector<CellResult> cells(spec.seeds.size() * np);
  const auto total = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < total; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    cells[idx] = run_cell(spec.config, spec.policies[idx % np], spec.seeds[idx / np],
                          spec.num_rounds, spec.time_budget_s, options);
  }
  return cells;
}

std::vector<CellResult> run_cells_serial(const ExperimentSpec& spec,
                                         const SimulationOptions& options) {
  spec.validate();
  std::vector<CellResult> cells;
  for (auto seed : spec.seeds) {
    for (auto policy : spec.policies) {
      cells.push_back(
          run_cell(spec.config, policy, seed, spec.num_rounds, spec.time_budget_s, options));
    }
  }
  return cells;
}

double accuracy_at_budget(const CellResult& cell, double budget_s) {
  double acc = cell.initial_accuracy;
  for (const auto& r : cell.records) {
    if (r.cumulative_time_s > budget_s) break;
    acc = r.accuracy;
  }
  return acc;
}

std::optional<double> time_to_accuracy(const CellResult& cell, double target) {
  if (cell.initial_accuracy >= target) return 0.0;
  for (const auto& r : cell.records) {
    if (r.accuracy >= target) return r.cumulative_time_s;
  }
  return std::nullopt;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double standard_error(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  const double n = static_cast<double>(values.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

void write_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << kCsvHeader << '\n';
  for (const auto& cell : cells) {
    const std::string policy = scheduler::to_string(cell.policy);
    for (const auto& r : cell.records) {
      const auto min_count = r.participation_counts.empty()
                                 ? std::size_t{0}
                                 : *std::min_element(r.participation_counts.begin(),
                                                     r.participation_counts.end());
      out << cell.seed << ',' << policy << ',' << r.round_index << ','
          << fmt(r.schedule.round_latency) << ',' << fmt(r.cumulative_time_s) << ','
          << fmt(r.accuracy) << ',' << r.schedule.num_selected() << ',' << min_count << ',';
      for (std::size_t k = 0; k < r.schedule.assignments.size(); ++k) {
        if (k > 0) out << ';';
        out << r.schedule.assignments[k].size();
      }
      out << '\n';
    }
  }
}

nlohmann::json summarize(const std::vector<CellResult>& cells, std::optional<double> time_budget_s) {
  nlohmann::json doc;
  doc["time_budget_s"] = time_budget_s ? nlohmann::json(*time_budget_s) : nlohmann::json(nullptr);
  doc["cells"] = nlohmann::json::array();
  std::map<std::string, std::vector<double>> at_budget;
  for (const auto& cell : cells) {
    nlohmann::json c;
    c["seed"] = cell.seed;
    c["policy"] = scheduler::to_string(cell.policy);
    c["rounds"] = cell.records.size();
    c["total_time_s"] = cell.records.empty() ? 0.0 : cell.records.back().cumulative_time_s;
    c["final_accuracy"] = cell.records.empty() ? cell.initial_accuracy : cell.records.back().accuracy;
    nlohmann::json tta = nlohmann::json::object();
    for (double target : kAccuracyTargets) {
      const auto t = time_to_accuracy(cell, target);
      tta[fmt(target)] = t ? nlohmann::json(*t) : nlohmann::json(nullptr);
    }
    c["time_to_accuracy_s"] = tta;
    if (time_budget_s) {
      const double acc = accuracy_at_budget(cell, *time_budget_s);
      c["accuracy_at_budget"] = acc;
      at_budget[scheduler::to_string(cell.policy)].push_back(acc);
    }
    doc["cells"].push_back(c);
  }
  if (time_budget_s) {
    nlohmann::json by_policy = nlohmann::json::object();
    for (const auto& [policy, values] : at_budget) {
      by_policy[policy] = {{"mean_accuracy_at_budget", mean(values)},
                           {"standard_error", standard_error(values)},
                           {"seeds", values.size()}};
    }
    doc["policies"] = by_policy;
  }
  return doc;
}

std::string summary_path_for(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  if (p.extension() == ".csv") p.replace_extension();
  return p.string() + ".summary.json";
}

void write_results(const std::string& csv_path, const std::vector<CellResult>& cells,
                   std::optional<double> time_budget_s) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot open '" + csv_path + "' for writing");
  write_csv(csv, cells);
  csv.close();
  if (!csv) throw IoError("failed writing '" + csv_path + "'");

  const std::string json_path = summary_path_for(csv_path);
  std::ofstream json(json_path, std::ios::binary);
  if (!json) throw IoError("cannot open '" + json_path + "' for writing");
  json << summarize(cells, time_budget_s).dump(2) << '\n';
  json.close();
  if (!json) throw IoError("failed writing '" + json_path + "'");
}

std::vector<CellResult> run_experiment(const ExperimentSpec& spec, const SimulationOptions& options) {
  spec.validate();
  if (spec.output_path.empty()) throw IoError("no output path given");
  // Fail on an unwritable path before spending time on the simulation.
  {
    std::error_code ec;
    const auto parent = std::filesystem::path(spec.output_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream probe(spec.output_path, std::ios::binary);
    if (!probe) throw IoError("cannot open '" + spec.output_path + "' for writing");
  }
  auto cells = run_cells(spec, options);
  write_results(spec.output_path, cells, spec.time_budget_s);
  return cells;
}

BudgetCalibration calibrate_budget(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                   std::size_t rounds, double fraction) {
  if (rounds < 4) throw ConfigError("calibration needs at least 4 rounds");
  ExperimentSpec spec;
  spec.config = config;
  spec.policies = {scheduler::Policy::dagsa};
  spec.num_rounds = rounds;
  spec.seeds = seeds;
  const auto cells = run_cells(spec);

  BudgetCalibration out;
  const std::size_t tail = std::max<std::size_t>(1, rounds / 4);
  std::vector<double> plateaus;
  for (const auto& cell : cells) {
    double sum = 0.0;
    for (std::size_t r = cell.records.size() - tail; r < cell.records.size(); ++r) {
      sum += cell.records[r].accuracy;
    }
    plateaus.push_back(sum / static_cast<double>(tail));
  }
  out.plateau_accuracy = mean(plateaus);
  const double target = fraction * out.plateau_accuracy;
  for (const auto& cell : cells) {
    const auto t = time_to_accuracy(cell, target);
    out.per_seed_time_s.push_back(t ? *t : cell.records.back().cumulative_time_s);
  }
  out.budget_s = mean(out.per_seed_time_s);
  return out;
}

std::optional<SweepKind> parse_sweep(const std::string& name) {
  if (name == "policies") return SweepKind::policies;
  if (name == "hetero-bw") return SweepKind::hetero_bw;
  if (name == "mobility") return SweepKind::mobility;
  return std::nullopt;
}

std::vector<SweepOutput> run_sweep(SweepKind kind, const SimConfig& config,
                                   const std::string& out_dir, const SweepOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

  SimConfig base = config;
  base.heterogeneous_bandwidth = false;
  const double budget = options.time_budget_s
                            ? *options.time_budget_s
                            : calibrate_budget(base, options.seeds, options.calibration_rounds).budget_s;

  auto run = [&](const std::string& name, const SimConfig& cfg,
                 std::vector<scheduler::Policy> policies) {
    ExperimentSpec spec;
    spec.config = cfg;
    spec.policies = std::move(policies);
    spec.time_budget_s = budget;
    spec.seeds = options.seeds;
    spec.output_path = (std::filesystem::path(out_dir) / (name + ".csv")).string();
    return SweepOutput{name, run_experiment(spec)};
  };

  std::vector<SweepOutput> out;
  switch (kind) {
    case SweepKind::policies:
      out.push_back(run("policies", base, scheduler::all_policies()));
      break;
    case SweepKind::hetero_bw: {
      SimConfig hetero = base;
      hetero.heterogeneous_bandwidth = true;
      out.push_back(run("hetero-bw-homogeneous", base, scheduler::all_policies()));
      out.push_back(run("hetero-bw-heterogeneous", hetero, scheduler::all_policies()));
      break;
    }
    case SweepKind::mobility:
      for (double v : kMobilitySweepSpeeds) {
        SimConfig moving = base;
        moving.speed_mps = v;
        out.push_back(run("mobility-v" + fmt(v), moving, {scheduler::Policy::dagsa}));
      }
      break;
  }
  return out;
}

OracleResult oracle_solve(const scheduler::PolicyInput& input, double rho2) {
  const std::size_t n = input.snapshot.num_users();
  const std::size_t m = input.snapshot.num_bs();
  if (n > kOracleMaxUsers || m > kOracleMaxBs) {
    throw std::invalid_argument("oracle_solve: instance larger than " +
                                std::to_string(kOracleMaxUsers) + " users x " +
                                std::to_string(kOracleMaxBs) + " BSs");
  }
  const Matrix se = channel::spectral_efficiencies(input.snapshot, input.config);

  // Optimal time of every (BS, user subset) pair, indexed by bitmask.
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> time_of(m * subsets, 0.0);
  for (BsId k = 0; k < m; ++k) {
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<UserId> members;
      for (UserId i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) members.push_back(i);
      }
      time_of[k * subsets + mask] =
          bandwidth::optimal_time(scheduler::make_problem(input, se, k, members));
    }
  }

  std::size_t necessary_mask = 0;
  for (UserId i : scheduler::necessary_set(input.ledger, input.config.rho1)) {
    necessary_mask |= std::size_t{1} << i;
  }
  const std::size_t need = scheduler::required_participants(n, rho2);

  OracleResult out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_code;
  std::vector<std::size_t> code(n, 0);  // 0 = unselected, k + 1 = BS k
  std::vector<std::size_t> masks(m);
  for (;;) {
    std::fill(masks.begin(), masks.end(), 0);
    std::size_t selected_mask = 0;
    for (UserId i = 0; i < n; ++i) {
      if (code[i] == 0) continue;
      masks[code[i] - 1] |= std::size_t{1} << i;
      selected_mask |= std::size_t{1} << i;
    }
    const auto count = static_cast<std::size_t>(std::popcount(selected_mask));
    if ((selected_mask & necessary_mask) == necessary_mask && count >= need) {
      ++out.feasible_count;
      double worst = 0.0;
      for (BsId k = 0; k < m; ++k) worst = std::max(worst, time_of[k * subsets + masks[k]]);
      if (worst < best) {
        best = worst;
        best_code = code;
      }
    }
    // Next code in base (m + 1).
    std::size_t pos = 0;
    while (pos < n && ++code[pos] > m) code[pos++] = 0;
    if (pos == n) break;
  }

  std::vector<std::vector<UserId>> assignments(m);
  for (UserId i = 0; i < n; ++i) {
    if (!best_code.empty() && best_code[i] > 0) assignments[best_code[i] - 1].push_back(i);
  }
  out.schedule = scheduler::build_schedule(input, std::move(assignments), scheduler::Allocation::optimal);
  out.latency = out.schedule.round_latency;
  return out;
}

}  // namespace flmob::experiment
