// Experiment runner: configures problems, runs support-size sweeps, and emits
// machine-readable CSV reports and profile data.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starcol/assembly.hpp"
#include "starcol/oracle.hpp"

namespace starcol {

enum class Problem { Bar1D, Beam3D };

enum class BcKind {
  EndForce,       // fixed end + end load (bar tip row / beam traction at loaded-face mid-node)
  EndForcePoint,  // beam: concentrated load on the loaded dof, interior row kept
  PrescribedTip,  // fixed end + prescribed displacement at the far-end mid-node
  FixedBoth       // 1D patch configuration: Dirichlet at both ends
};

struct ExperimentConfig {
  Problem problem = Problem::Bar1D;
  Scheme scheme = Scheme::FPM;
  Mode mode = Mode::Legacy;
  int n = 0;  // 0: scheme default (FPM/RPCM 20|50, PPCM basis size, SPH 7|50)
  std::vector<int> sweep_n;

  double E = 200000.0;
  double nu = 0.33;

  double bar_length = 99.0;
  int bar_count = 100;
  int beam_nx = 3, beam_ny = 3, beam_nz = 40;  // full grid: 5x5x100
  bool full_grid = false;
  double grid_spacing = 1.0;

  BcKind bc = BcKind::EndForce;
  double load = 50.0;            // N (end-force kinds)
  double prescribed_delta = 5.0; // mm (PrescribedTip)
  double area = 1.0;             // mm^2, 1D load divisor

  bool stabilize = true;
  std::optional<double> h_stab;  // unset: legacy rmax / corrected nodal spacing

  double rbf_c = 0.0;            // 0: 3 * spacing
  bool rbf_augment = true;
  double sph_h = 0.0;            // 0: 1.3 * spacing

  ExecPolicy exec = ExecPolicy::Parallel;
  std::string out;
};

struct RunRecord {
  ExperimentConfig config;  // full parameter echo
  int n_used = 0;
  double tip_mm = 0.0;
  ErrorReport errors;
  double min_moment_rcond = 0.0;
  double global_rcond = 0.0;
  double residual_norm = 0.0;
  double wall_ms = 0.0;
  std::string error;         // empty on success; stage/node annotation otherwise
  std::string failed_stage;  // cloud|stencil|assembly|bc|solve|oracle
};

// Flat key = value text file; '#' comments; unknown keys are errors.
ExperimentConfig parse_config(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// End-to-end: cloud -> stencils -> assembly -> BC -> solve -> oracle compare.
// Stage failures are captured in the record, not thrown.
RunRecord run(const ExperimentConfig& config);

// One record per n, emitted in list order. Bar problem only.
std::vector<RunRecord> sweep_support_size(const ExperimentConfig& config,
                                          const std::vector<int>& n_list);

// Deterministic CSV: header + data rows sorted by (scheme, n). The wall_ms
// column is left empty in data rows; measured times go to `path + ".meta"`
// so repeated runs produce byte-identical data files.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

// position, computed displacement, oracle value per sample.
void emit_profile(const RunRecord& record, const std::string& path);

// Pinned support-size sweep of the legacy 1D bar benchmark.
std::vector<int> table1_support_sizes();
std::vector<RunRecord> table1(const std::string& out_path);

// End-force beam study: corrected mode without and with FIC stabilization.
std::vector<RunRecord> beam3d_fig3(const std::string& out_path, bool full_grid, bool stabilize_both);

const char* scheme_name(Scheme s);
const char* mode_name(Mode m);
const char* problem_name(Problem p);

}  // namespace starcol
