#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcosync/config.hpp"
#include "pcosync/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitProperty = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> t_end;
  std::optional<double> dense_dt;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  auto* cfg = cmd->add_option("--config", opts.config_path,
                              "Path to a JSON run config");
  auto* preset =
      cmd->add_option("--preset", opts.preset_name, "Built-in preset name");
  cfg->excludes(preset);
  cmd->add_option("--out-dir", opts.out_dir, "Artifact output directory");
  cmd->add_option("--seed", opts.seed, "Override the initial-condition seed");
  cmd->add_option("--t-end", opts.t_end, "Override the horizon in seconds");
  cmd->add_option("--dense", opts.dense_dt,
                  "Record dense samples at this interval");
}

pcosync::RunConfig resolve_config(const CommonOpts& opts) {
  if (opts.config_path.empty() && opts.preset_name.empty()) {
    throw std::invalid_argument("give either --config or --preset");
  }
  pcosync::RunConfig cfg = opts.config_path.empty()
                               ? pcosync::preset(opts.preset_name)
                               : pcosync::load_config(opts.config_path);
  if (opts.t_end) cfg.t_end = *opts.t_end;
  if (opts.dense_dt) {
    cfg.record_mode = pcosync::RecordMode::Dense;
    cfg.sample_dt = *opts.dense_dt;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven pulse-coupled oscillator network simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts, batch_opts, validate_opts;
  auto* run_cmd = app.add_subcommand("run", "Execute one simulation");
  add_common(run_cmd, run_opts);
  auto* batch_cmd =
      app.add_subcommand("batch", "Repeat a run over consecutive seeds");
  add_common(batch_cmd, batch_opts);
  auto* validate_cmd =
      app.add_subcommand("validate", "Check a config without running it");
  add_common(validate_cmd, validate_opts);
  auto* preset_cmd = app.add_subcommand("preset", "Preset utilities");
  auto* preset_list = preset_cmd->add_subcommand("list", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // fold CLI11's many parse-error codes into the validation exit code,
    // keeping 0 for --help
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (preset_cmd->parsed()) {
      if (preset_list->parsed()) {
        for (const auto& name : pcosync::preset_names()) {
          std::cout << name << "\n";
        }
        return kExitOk;
      }
      std::cerr << "usage: pcosync preset list\n";
      return kExitValidation;
    }

    if (validate_cmd->parsed()) {
      resolve_config(validate_opts);
      std::cout << "config ok\n";
      return kExitOk;
    }

    if (run_cmd->parsed()) {
      const auto cfg = resolve_config(run_opts);
      const auto out = pcosync::execute_run(cfg, run_opts.seed);
      pcosync::write_artifacts(cfg, out, run_opts.out_dir);
      std::cout << "final_L=" << pcosync::format_float(out.summary.final_l)
                << " jumps=" << out.summary.jump_count << " synced="
                << (out.summary.synced ? "yes" : "no");
      if (out.summary.sync_time) {
        std::cout << " sync_time="
                  << pcosync::format_float(*out.summary.sync_time);
      }
      std::cout << "\nartifacts in " << run_opts.out_dir << "\n";
      return out.summary.monotone_violations == 0 ? kExitOk : kExitProperty;
    }

    if (batch_cmd->parsed()) {
      const auto cfg = resolve_config(batch_opts);
      const auto report = pcosync::run_batch(cfg, batch_opts.seed);
      pcosync::write_batch_report(report, batch_opts.out_dir.empty()
                                              ? "batch_report.csv"
                                              : batch_opts.out_dir +
                                                    "/batch_report.csv");
      std::cout << "runs=" << report.count << " synced=" << report.synced_runs
                << " monotone_violations=" << report.monotone_violations
                << " order_change_runs=" << report.order_change_runs << "\n";
      if (!report.failures.empty() || report.monotone_violations > 0) {
        for (const auto& failure : report.failures) {
          std::cerr << failure << "\n";
        }
        return kExitProperty;
      }
      return kExitOk;
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitProperty;
  }
  return kExitValidation;
}
