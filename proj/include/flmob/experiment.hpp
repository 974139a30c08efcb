#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "flmob/config.hpp"
#include "flmob/scheduler.hpp"
#include "flmob/simulation.hpp"

namespace flmob::experiment {

/// Raised when results cannot be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Safety cap on rounds for budget-only runs.
inline constexpr std::size_t kMaxRounds = 100000;

struct ExperimentSpec {
  SimConfig config;
  std::vector<scheduler::Policy> policies;
  /// Zero means "until the time budget is exhausted".
  std::size_t num_rounds = 0;
  /// Simulated seconds; the run stops after the round that crosses it.
  std::optional<double> time_budget_s;
  std::vector<std::uint64_t> seeds;
  std::string output_path;

  /// Throws ConfigError if neither a round count nor a budget is given or
  /// there are no seeds or policies.
  void validate() const;
};

/// Results of one (seed, policy) pair.
struct CellResult {
  std::uint64_t seed = 0;
  scheduler::Policy policy = scheduler::Policy::dagsa;
  double initial_accuracy = 0.0;
  std::vector<RoundRecord> records;
};

CellResult run_cell(const SimConfig& config, scheduler::Policy policy, std::uint64_t seed,
                    std::size_t num_rounds, std::optional<double> time_budget_s,
                    const SimulationOptions& options = {});

/// Runs every (seed, policy) cell; cells are independent and run in
/// parallel. Output order is seeds-major, then policies, as listed.
std::vector<CellResult> run_cells(const ExperimentSpec& spec, const SimulationOptions& options = {});

/// Reference implementation of run_cells().
std::vector<CellResult> run_cells_serial(const ExperimentSpec& spec,
                                         const SimulationOptions& options = {});

/// Accuracy of the last round finishing at or under the budget (the initial
/// accuracy when even the first round overruns it).
double accuracy_at_budget(const CellResult& cell, double budget_s);

/// Simulated time at which accuracy first reaches `target` (zero if the
/// initial model already does).
std::optional<double> time_to_accuracy(const CellResult& cell, double target);

double mean(const std::vector<double>& values);
/// Sample standard deviation over sqrt(n); zero for fewer than two values.
double standard_error(const std::vector<double>& values);

inline constexpr const char* kCsvHeader =
    "seed,policy,round,round_latency_s,cumulative_time_s,accuracy,num_selected,"
    "min_participation_count,per_bs_user_counts";

void write_csv(std::ostream& out, const std::vector<CellResult>& cells);

nlohmann::json summarize(const std::vector<CellResult>& cells,
                         std::optional<double> time_budget_s);

/// Summary file path for a CSV path: `x.csv` -> `x.summary.json`.
std::string summary_path_for(const std::string& csv_path);

/// Writes CSV and JSON summary. Throws IoError on failure.
void write_results(const std::string& csv_path, const std::vector<CellResult>& cells,
                   std::optional<double> time_budget_s);

/// run_cells() followed by write_results() to spec.output_path.
std::vector<CellResult> run_experiment(const ExperimentSpec& spec,
                                       const SimulationOptions& options = {});

struct BudgetCalibration {
  double plateau_accuracy = 0.0;
  double budget_s = 0.0;
  std::vector<double> per_seed_time_s;
};

/// Runs DAGSA for `rounds` rounds per seed; the plateau is the mean accuracy
/// over the last quarter of rounds (averaged over seeds) and the budget is
/// the mean time at which each seed first reaches `fraction` of it.
BudgetCalibration calibrate_budget(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                   std::size_t rounds, double fraction = 0.95);

enum class SweepKind { policies, hetero_bw, mobility };
std::optional<SweepKind> parse_sweep(const std::string& name);

inline const std::vector<double> kMobilitySweepSpeeds = {0.0, 5.0, 10.0, 20.0, 40.0};

struct SweepOptions {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t calibration_rounds = 300;
  /// Skips calibration when set.
  std::optional<double> time_budget_s;
};

struct SweepOutput {
  std::string name;
  std::vector<CellResult> cells;
};

/// Runs one experiment family; every output file is written into `out_dir`
/// as <name>.csv plus <name>.summary.json.
std::vector<SweepOutput> run_sweep(SweepKind kind, const SimConfig& config,
                                   const std::string& out_dir, const SweepOptions& options);

struct OracleResult {
  double latency = 0.0;
  Schedule schedule;
  std::size_t feasible_count = 0;
};

inline constexpr std::size_t kOracleMaxUsers = 8;
inline constexpr std::size_t kOracleMaxBs = 3;

/// Exhaustive search over every map user -> {unselected} U BSs that keeps
/// the necessary users selected and at least ceil(N * rho2) participants,
/// scoring each by the worst per-BS optimal time. Throws
/// std::invalid_argument beyond kOracleMaxUsers x kOracleMaxBs.
OracleResult oracle_solve(const scheduler::PolicyInput& input, double rho2);

}  // namespace flmob::experiment
