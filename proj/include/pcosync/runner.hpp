#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcosync/config.hpp"
#include "pcosync/engine.hpp"
#include "pcosync/metrics.hpp"

namespace pcosync {

/// Synchronization is declared at L below this level, sustained to the end
/// of the run.
inline constexpr double kSyncThreshold = 1e-6;

struct RunSummary {
  std::uint64_t seed = 0;
  double final_l = 0.0;
  std::vector<double> final_chain_l;  // decomposed chains; trees only
  std::optional<double> sync_time;
  long jump_count = 0;
  int monotone_violations = 0;
  bool synced = false;
};

struct RunOutput {
  Trajectory traj;
  RunSummary summary;
  std::vector<std::vector<int>> chains;  // tree decomposition, if any
};

/// One deterministic simulation of the config, plus derived summary
/// figures (L traces, sync time, monotonicity audit).
RunOutput execute_run(const RunConfig& cfg,
                      std::optional<std::uint64_t> seed_override = {});

/// Writes trajectory.csv, firings.csv, and summary.csv under out_dir.
void write_artifacts(const RunConfig& cfg, const RunOutput& out,
                     const std::string& out_dir);

struct BatchReport {
  int count = 0;
  int synced_runs = 0;
  double sync_time_min = 0.0;
  double sync_time_median = 0.0;
  double sync_time_max = 0.0;
  long monotone_violations = 0;
  int order_change_runs = 0;
  std::vector<std::string> failures;
};

/// Repeats the run with seeds base..base+count-1 and aggregates the
/// synchronization and monotonicity outcomes.
BatchReport run_batch(const RunConfig& cfg,
                      std::optional<std::uint64_t> base_seed_override = {});

void write_batch_report(const BatchReport& report, const std::string& path);

/// Per-sample L series: global L for chains, max over decomposed-chain L
/// for trees.
std::vector<double> sync_measure_series(const Trajectory& traj,
                                        const NetworkTopology& topo);

std::string format_float(double v);  // 17 significant digits

}  // namespace pcosync
