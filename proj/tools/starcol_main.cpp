// Benchmark CLI: run single experiments, support-size sweeps, the pinned
// 1D conditioning table, and the 3D end-force stabilization study.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starcol/errors.hpp"
#include "starcol/harness.hpp"

using namespace starcol;

namespace {

// Flag values are applied through the same validator as config-file keys, so
// "--scheme rpcm" and "scheme = rpcm" cannot drift apart.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> kv;

  void set(const std::string& key, const std::string& value) { kv.emplace_back(key, value); }
  void apply(ExperimentConfig& cfg) const {
    for (const auto& [k, v] : kv) apply_config_line(cfg, k, v);
  }
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
  cmd->add_option_function<std::string>(
         "--config", [&ov, &config_path](const std::string& v) { config_path = v; },
         "flat key = value config file");
  auto opt = [cmd, &ov](const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&ov, key](const std::string& v) { ov.set(key, v); }, help);
  };
  opt("--problem", "problem", "bar1d|beam3d");
  opt("--scheme", "scheme", "fpm|ppcm|rpcm|sph");
  opt("--mode", "mode", "legacy|corrected");
  opt("--n", "n", "support size (0: scheme default)");
  opt("--bc", "bc", "end_force|end_force_point|prescribed_tip|fixed_both");
  opt("--stabilize", "stabilize", "on|off boundary-row stabilization");
  opt("--h-stab", "h_stab", "stabilization length (default: rmax legacy, spacing corrected)");
  opt("--out", "out", "CSV output path (times go to <out>.meta)");
  cmd->add_flag_callback("--full", [&ov] { ov.set("full_grid", "on"); },
                         "use the full 5x5x100 beam grid");
  cmd->add_flag_callback("--serial", [&ov] { ov.set("exec", "serial"); },
                         "serial reference kernels instead of OpenMP");
}

ExperimentConfig load_config(const std::string& config_path, const Overrides& ov) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = parse_config(config_path);
    } catch (const IoError& e) {
      throw ConfigError(e.what());  // unreadable config counts as a config error
    }
  }
  ov.apply(cfg);
  return cfg;
}

void print_record(const RunRecord& r) {
  std::printf("%-4s %-9s n=%-3d %-6s tip=%-12.6g rel_l2=%-10.4g osc=%-3d mom_rcond=%-9.3g "
              "K_rcond=%-9.3g res=%-9.3g %7.1f ms",
              scheme_name(r.config.scheme), mode_name(r.config.mode), r.n_used,
              problem_name(r.config.problem), r.tip_mm, r.errors.rel_l2,
              r.errors.oscillation_count, r.min_moment_rcond, r.global_rcond, r.residual_norm,
              r.wall_ms);
  if (!r.error.empty()) std::printf("  ERROR[%s]: %s", r.failed_stage.c_str(), r.error.c_str());
  std::printf("\n");
}

int finish(const std::vector<RunRecord>& records, const std::string& out,
           const std::string& profile_path) {
  for (const auto& r : records) print_record(r);
  if (!out.empty()) {
    emit_csv(records, out);
    std::printf("wrote %s (+.meta)\n", out.c_str());
  }
  if (!profile_path.empty()) {
    emit_profile(records.back(), profile_path);
    std::printf("wrote %s\n", profile_path.c_str());
  }
  for (const auto& r : records)
    if (!r.error.empty()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshfree strong-form collocation benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string n_list_csv, profile_path;

  CLI::App* cmd_run = app.add_subcommand("run", "single experiment");
  add_common_flags(cmd_run, config_path, ov);
  cmd_run->add_option("--profile", profile_path, "write position,computed,reference profile CSV");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "support-size sweep on the 1D bar");
  add_common_flags(cmd_sweep, config_path, ov);
  cmd_sweep->add_option("--n-list", n_list_csv, "comma-separated support sizes");

  CLI::App* cmd_table1 = app.add_subcommand("table1", "pinned legacy conditioning sweep");
  std::string t1_out;
  cmd_table1->add_option("--out", t1_out, "CSV output path");

  CLI::App* cmd_fig3 = app.add_subcommand("beam3d-fig3", "3D end-force stabilization study");
  std::string f3_out = "beam3d_fig3.csv";
  bool f3_full = false;
  std::string f3_stab = "on";
  cmd_fig3->add_option("--out", f3_out, "CSV output path");
  cmd_fig3->add_flag("--full", f3_full, "use the full 5x5x100 grid");
  cmd_fig3->add_option("--stabilize", f3_stab, "on: emit unstabilized + stabilized; off: only unstabilized");

  try {
    app.parse(argc, argv);

    if (*cmd_run) {
      ExperimentConfig cfg = load_config(config_path, ov);
      return finish({run(cfg)}, cfg.out, profile_path);
    }
    if (*cmd_sweep) {
      ExperimentConfig cfg = load_config(config_path, ov);
      if (!n_list_csv.empty()) apply_config_line(cfg, "sweep_n", n_list_csv);
      std::vector<RunRecord> records = sweep_support_size(cfg, cfg.sweep_n);
      return finish(records, cfg.out, "");
    }
    if (*cmd_table1) {
      return finish(table1(t1_out), "", "");
    }
    if (*cmd_fig3) {
      if (f3_stab != "on" && f3_stab != "off")
        throw ConfigError("--stabilize expects on|off");
      return finish(beam3d_fig3(f3_out, f3_full, f3_stab == "on"), "", "");
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are config errors
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
