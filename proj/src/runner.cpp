#include "pcosync/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace pcosync {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// L per decomposed chain at every sample; one series per chain
std::vector<std::vector<double>> chain_l_series(
    const Trajectory& traj, const std::vector<std::vector<int>>& chains) {
  std::vector<std::vector<double>> series(chains.size());
  for (size_t c = 0; c < chains.size(); ++c) {
    series[c].reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
      series[c].push_back(lyapunov_l(s.x, chains[c]));
    }
  }
  return series;
}

int count_monotone_violations(const Trajectory& traj,
                              const std::vector<double>& series, double tol) {
  int violations = 0;
  for (size_t k = 1; k < series.size(); ++k) {
    const bool during_flow = traj.samples[k].j == traj.samples[k - 1].j;
    const double change = series[k] - series[k - 1];
    if (during_flow ? std::abs(change) > tol : change > tol) ++violations;
  }
  return violations;
}

std::optional<double> sustained_sync_time(const Trajectory& traj,
                                          const std::vector<double>& measure) {
  // first sample from which the measure stays below threshold to the end
  std::optional<double> since;
  for (size_t k = 0; k < measure.size(); ++k) {
    if (measure[k] < kSyncThreshold) {
      if (!since) since = traj.samples[k].t;
    } else {
      since.reset();
    }
  }
  return since;
}

}  // namespace

std::vector<double> sync_measure_series(const Trajectory& traj,
                                        const NetworkTopology& topo) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  if (topo.kind() == TopologyKind::DirectedTree) {
    const auto chains = topo.decompose_tree();
    for (const auto& s : traj.samples) {
      double worst = 0.0;
      for (const auto& chain : chains) {
        worst = std::max(worst, lyapunov_l(s.x, chain));
      }
      out.push_back(worst);
    }
  } else {
    for (const auto& s : traj.samples) out.push_back(lyapunov_l(s.x));
  }
  return out;
}

RunOutput execute_run(const RunConfig& cfg,
                      std::optional<std::uint64_t> seed_override) {
  const auto topo = cfg.make_topology();
  const auto params = cfg.make_params();
  const std::uint64_t seed = seed_override.value_or(cfg.seed);

  RunOutput out;
  out.traj = simulate(cfg.make_initial(seed), topo, cfg.prfs, params);
  out.summary.seed = seed;
  out.summary.jump_count = out.traj.samples.back().j;

  const bool tree = topo.kind() == TopologyKind::DirectedTree;
  if (tree) out.chains = topo.decompose_tree();

  const auto measure = sync_measure_series(out.traj, topo);
  out.summary.sync_time = sustained_sync_time(out.traj, measure);
  out.summary.synced = out.summary.sync_time.has_value();
  out.summary.final_l = lyapunov_l(out.traj.samples.back().x);

  if (tree) {
    for (const auto& chain : out.chains) {
      out.summary.final_chain_l.push_back(
          lyapunov_l(out.traj.samples.back().x, chain));
    }
    for (const auto& series : chain_l_series(out.traj, out.chains)) {
      out.summary.monotone_violations +=
          count_monotone_violations(out.traj, series, 1e-9);
    }
  } else if (!params.perturbation) {
    std::vector<double> series;
    series.reserve(out.traj.samples.size());
    for (const auto& s : out.traj.samples) series.push_back(lyapunov_l(s.x));
    out.summary.monotone_violations =
        count_monotone_violations(out.traj, series, 1e-9);
  }
  return out;
}

void write_artifacts(const RunConfig& cfg, const RunOutput& out,
                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::ios_base::failure("cannot create " + out_dir);

  const int n = cfg.n;
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write " + name);
    return f;
  };

  {
    auto f = open("trajectory.csv");
    f << "t,j";
    for (int i = 1; i <= n; ++i) f << ",x" << i;
    for (int i = 1; i <= n; ++i) f << ",d" << i;
    f << ",L,Vc";
    for (size_t c = 0; c < out.chains.size(); ++c) f << ",L" << c + 1;
    f << "\n";
    for (const auto& s : out.traj.samples) {
      f << format_float(s.t) << "," << s.j;
      for (int i = 0; i < n; ++i) f << "," << format_float(s.x[i]);
      const auto m = compute_metrics(s.x);
      for (int i = 0; i < n; ++i) f << "," << format_float(m.deltas[i]);
      f << "," << format_float(m.lyapunov_l) << ","
        << format_float(m.containing_arc);
      for (const auto& chain : out.chains) {
        f << "," << format_float(lyapunov_l(s.x, chain));
      }
      f << "\n";
    }
  }

  {
    auto f = open("firings.csv");
    f << "t,j,node\n";
    for (const auto& ev : out.traj.firings) {
      f << format_float(ev.t) << "," << ev.j << "," << ev.node << "\n";
    }
  }

  {
    auto f = open("summary.csv");
    f << "key,value\n";
    f << "topology," << to_string(cfg.kind) << "\n";
    f << "n," << n << "\n";
    f << "seed," << out.summary.seed << "\n";
    f << "final_L," << format_float(out.summary.final_l) << "\n";
    for (size_t c = 0; c < out.summary.final_chain_l.size(); ++c) {
      f << "final_L" << c + 1 << ","
        << format_float(out.summary.final_chain_l[c]) << "\n";
    }
    f << "synced," << (out.summary.synced ? 1 : 0) << "\n";
    f << "sync_time,"
      << (out.summary.sync_time ? format_float(*out.summary.sync_time) : "")
      << "\n";
    f << "jump_count," << out.summary.jump_count << "\n";
    f << "monotone_violations," << out.summary.monotone_violations << "\n";
  }
}

BatchReport run_batch(const RunConfig& cfg,
                      std::optional<std::uint64_t> base_seed_override) {
  BatchReport report;
  report.count = cfg.batch_count;
  const std::uint64_t base = base_seed_override.value_or(cfg.batch_base_seed);
  const auto topo = cfg.make_topology();

  std::vector<double> sync_times;
  for (int r = 0; r < cfg.batch_count; ++r) {
    const std::uint64_t seed = base + static_cast<std::uint64_t>(r);
    try {
      const auto out = execute_run(cfg, seed);
      if (out.summary.synced) {
        ++report.synced_runs;
        sync_times.push_back(*out.summary.sync_time);
      }
      report.monotone_violations += out.summary.monotone_violations;
      if (topo.n() >= 2) {
        try {
          if (firing_order_changes(out.traj, topo.n()) > 0) {
            ++report.order_change_runs;
          }
        } catch (const std::invalid_argument&) {
          // too few complete rounds to compare
        }
      }
    } catch (const std::exception& e) {
      report.failures.push_back("seed " + std::to_string(seed) + ": " +
                                e.what());
    }
  }

  if (!sync_times.empty()) {
    std::sort(sync_times.begin(), sync_times.end());
    report.sync_time_min = sync_times.front();
    report.sync_time_max = sync_times.back();
    report.sync_time_median = sync_times[sync_times.size() / 2];
  }
  return report;
}

void write_batch_report(const BatchReport& report, const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  f << "key,value\n";
  f << "runs," << report.count << "\n";
  f << "synced_runs," << report.synced_runs << "\n";
  f << "success_rate,"
    << format_float(report.count ? static_cast<double>(report.synced_runs) /
                                       report.count
                                 : 0.0)
    << "\n";
  f << "sync_time_min," << format_float(report.sync_time_min) << "\n";
  f << "sync_time_median," << format_float(report.sync_time_median) << "\n";
  f << "sync_time_max," << format_float(report.sync_time_max) << "\n";
  f << "monotone_violations," << report.monotone_violations << "\n";
  f << "order_change_runs," << report.order_change_runs << "\n";
  f << "failed_runs," << report.failures.size() << "\n";
  for (const auto& failure : report.failures) {
    f << "failure," << failure << "\n";
  }
}

}  // namespace pcosync
