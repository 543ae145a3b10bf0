#include "starcol/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "starcol/errors.hpp"
#include "starcol/solve.hpp"

namespace starcol {

namespace {

int default_support(Scheme s, int dimension) {
  switch (s) {
    case Scheme::FPM:
    case Scheme::RPCM:
      return dimension == 1 ? 20 : 50;
    case Scheme::PPCM:
      return dimension == 1 ? 3 : 10;
    case Scheme::SPH:
      return dimension == 1 ? 7 : 50;
  }
  return 20;
}

ApproxOptions approx_for_mode(Mode m) {
  ApproxOptions o;
  if (m == Mode::Legacy) {
    o.coord = CoordMode::Global;
    o.eval = EvalMode::LegacyLast;
    o.rcond_floor = 0.0;  // invert unconditionally
  } else {
    o.coord = CoordMode::Centered;
    o.eval = EvalMode::Star;
    o.rcond_floor = 1e-14;
  }
  return o;
}

StencilConfig stencil_config(const ExperimentConfig& c, int n_used, double spacing, int dimension) {
  StencilConfig s;
  s.scheme = c.scheme;
  s.n = n_used;
  s.basis.dimension = dimension;
  s.approx = approx_for_mode(c.mode);
  s.rbf.c_rbf = c.rbf_c > 0.0 ? c.rbf_c : 3.0 * spacing;
  s.rbf.augment_const = c.rbf_augment;
  s.sph.h = c.sph_h > 0.0 ? c.sph_h : 1.3 * spacing;
  s.sph.volume = dimension == 1 ? spacing : spacing * spacing * spacing;
  s.exec = c.exec;
  return s;
}

double min_rcond(const LinearSystem& sys) {
  double m = 1.0;
  for (double r : sys.node_moment_rcond) m = std::min(m, r);
  return m;
}

void decompose(const NodeCloud& cloud, int node, int& i, int& j, int& k) {
  int nz = cloud.grid_shape[2], ny = cloud.grid_shape[1];
  k = node % nz;
  j = (node / nz) % ny;
  i = node / (ny * nz);
}

void run_bar(const ExperimentConfig& config, RunRecord& rec, std::string& stage) {
  stage = "cloud";
  NodeCloud cloud = generate_grid_1d(config.bar_length, config.bar_count);
  int N = cloud.count();
  int n_used = config.n > 0 ? config.n : default_support(config.scheme, 1);
  rec.n_used = n_used;
  StencilConfig scfg = stencil_config(config, n_used, cloud.spacing, 1);
  Material mat = make_material(config.E, config.nu);

  stage = "assembly";
  LinearSystem sys = assemble_bar_1d(cloud, mat, scfg);

  stage = "bc";
  switch (config.bc) {
    case BcKind::EndForce:
      apply_dirichlet(sys, {{0, 0, 0.0}});
      apply_neumann_1d(sys, cloud, N - 1, config.load, config.area, mat, scfg, config.stabilize,
                       config.h_stab);
      break;
    case BcKind::EndForcePoint:
      apply_dirichlet(sys, {{0, 0, 0.0}});
      apply_point_load_3d(sys, N - 1, 0, config.load, config.area);
      break;
    case BcKind::PrescribedTip:
    case BcKind::FixedBoth:
      apply_dirichlet(sys, {{0, 0, 0.0}, {N - 1, 0, config.prescribed_delta}});
      break;
  }
  rec.min_moment_rcond = min_rcond(sys);

  stage = "solve";
  Solution sol = solve_dense(sys, config.exec);
  rec.global_rcond = sol.global_rcond;
  rec.residual_norm = sol.residual_norm;
  if (!linalg::all_finite(sol.u)) {
    rec.error = sol.pivot_warnings.empty() ? "non-finite solution" : sol.pivot_warnings.front();
    rec.failed_stage = "solve";
  }

  stage = "oracle";
  std::vector<double> positions(N), reference(N);
  for (int a = 0; a < N; ++a) {
    double x = cloud.points[a][0];
    positions[a] = x;
    if (config.bc == BcKind::EndForce || config.bc == BcKind::EndForcePoint)
      reference[a] = bar_axial(x, config.load, config.E, config.area);
    else
      reference[a] = config.prescribed_delta * x / config.bar_length;
  }
  rec.errors = compare(positions, sol.u, reference);
  rec.tip_mm = sol.u[N - 1];
}

void run_beam(const ExperimentConfig& config, RunRecord& rec, std::string& stage) {
  stage = "cloud";
  int nx = config.full_grid ? 5 : config.beam_nx;
  int ny = config.full_grid ? 5 : config.beam_ny;
  int nz = config.full_grid ? 100 : config.beam_nz;
  double sp = config.grid_spacing;
  NodeCloud cloud = generate_grid_3d(nx, ny, nz, sp, {1.0, 1.0, 1.0});
  int n_used = config.n > 0 ? config.n : default_support(config.scheme, 3);
  rec.n_used = n_used;
  StencilConfig scfg = stencil_config(config, n_used, sp, 3);
  Material mat = make_material(config.E, config.nu);

  stage = "assembly";
  LinearSystem sys = assemble_navier_3d(cloud, mat, scfg);

  stage = "bc";
  int cx = (nx - 1) / 2, cy = (ny - 1) / 2;
  int mid = grid_index(cloud, cx, cy, nz - 1);  // center of the far face
  switch (config.bc) {
    case BcKind::PrescribedTip:
      apply_dirichlet(sys, {{mid, 1, config.prescribed_delta}});
      break;
    case BcKind::EndForce: {
      // traction-free rows on every boundary node off the fixed plane, then
      // the end force smeared over the cross-section at the far-face center
      for (int node = 0; node < cloud.count(); ++node) {
        int i, j, k;
        decompose(cloud, node, i, j, k);
        if (k == 0 || !is_boundary_node(cloud, node)) continue;
        apply_neumann_3d(sys, cloud, node, {0.0, 0.0, 0.0}, resolve_normal(cloud, node), mat,
                         scfg, config.stabilize, config.h_stab);
      }
      double cross_area = (nx - 1) * sp * ((ny - 1) * sp);
      sys.F[3 * mid + 1] = config.load / cross_area;
      break;
    }
    case BcKind::EndForcePoint:
      apply_point_load_3d(sys, mid, 1, config.load, sp * sp);
      break;
    case BcKind::FixedBoth:
      throw ConfigError("fixed_both is a 1D configuration");
  }
  std::vector<DirichletEntry> fixed;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int a = 0; a < 3; ++a) fixed.push_back({grid_index(cloud, i, j, 0), a, 0.0});
  apply_dirichlet(sys, fixed);
  rec.min_moment_rcond = min_rcond(sys);

  stage = "solve";
  Solution sol = solve_dense(sys, config.exec);
  rec.global_rcond = sol.global_rcond;
  rec.residual_norm = sol.residual_norm;
  if (!linalg::all_finite(sol.u)) {
    rec.error = sol.pivot_warnings.empty() ? "non-finite solution" : sol.pivot_warnings.front();
    rec.failed_stage = "solve";
  }

  stage = "oracle";
  // y-deflection along the central axis against the Euler-Bernoulli shape;
  // profile positions are absolute z coordinates, the oracle argument is the
  // distance from the fixed end
  double L = (nz - 1) * sp;
  std::vector<double> positions(nz), computed(nz), reference(nz);
  for (int k = 0; k < nz; ++k) {
    double z = k * sp;
    positions[k] = cloud.points[grid_index(cloud, cx, cy, k)][2];
    computed[k] = sol.u[3 * grid_index(cloud, cx, cy, k) + 1];
    if (config.bc == BcKind::PrescribedTip) {
      reference[k] = cantilever_prescribed_tip(z, config.prescribed_delta, L);
    } else {
      double I = ((nx - 1) * sp) * std::pow((ny - 1) * sp, 3) / 12.0;
      reference[k] = cantilever_end_force(z, config.load, config.E, I, L);
    }
  }
  rec.errors = compare(positions, computed, reference);
  rec.tip_mm = sol.u[3 * mid + 1];
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected on/off, got '" + value + "'");
}

}  // namespace

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    if (value == "bar1d") cfg.problem = Problem::Bar1D;
    else if (value == "beam3d") cfg.problem = Problem::Beam3D;
    else throw ConfigError("key 'problem': expected bar1d|beam3d, got '" + value + "'");
  } else if (key == "scheme") {
    if (value == "fpm") cfg.scheme = Scheme::FPM;
    else if (value == "ppcm") cfg.scheme = Scheme::PPCM;
    else if (value == "rpcm") cfg.scheme = Scheme::RPCM;
    else if (value == "sph") cfg.scheme = Scheme::SPH;
    else throw ConfigError("key 'scheme': expected fpm|ppcm|rpcm|sph, got '" + value + "'");
  } else if (key == "mode") {
    if (value == "legacy") cfg.mode = Mode::Legacy;
    else if (value == "corrected") cfg.mode = Mode::Corrected;
    else throw ConfigError("key 'mode': expected legacy|corrected, got '" + value + "'");
  } else if (key == "bc") {
    if (value == "end_force") cfg.bc = BcKind::EndForce;
    else if (value == "end_force_point") cfg.bc = BcKind::EndForcePoint;
    else if (value == "prescribed_tip") cfg.bc = BcKind::PrescribedTip;
    else if (value == "fixed_both") cfg.bc = BcKind::FixedBoth;
    else
      throw ConfigError("key 'bc': expected end_force|end_force_point|prescribed_tip|fixed_both, got '" +
                        value + "'");
  } else if (key == "exec") {
    if (value == "serial") cfg.exec = ExecPolicy::Serial;
    else if (value == "parallel") cfg.exec = ExecPolicy::Parallel;
    else throw ConfigError("key 'exec': expected serial|parallel, got '" + value + "'");
  } else if (key == "n") {
    cfg.n = parse_int(key, value);
  } else if (key == "sweep_n") {
    cfg.sweep_n.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.sweep_n.push_back(parse_int(key, trim(item)));
    if (cfg.sweep_n.empty()) throw ConfigError("key 'sweep_n': empty list");
  } else if (key == "E") {
    cfg.E = parse_double(key, value);
  } else if (key == "nu") {
    cfg.nu = parse_double(key, value);
  } else if (key == "bar_length") {
    cfg.bar_length = parse_double(key, value);
  } else if (key == "bar_count") {
    cfg.bar_count = parse_int(key, value);
  } else if (key == "beam_nx") {
    cfg.beam_nx = parse_int(key, value);
  } else if (key == "beam_ny") {
    cfg.beam_ny = parse_int(key, value);
  } else if (key == "beam_nz") {
    cfg.beam_nz = parse_int(key, value);
  } else if (key == "full_grid") {
    cfg.full_grid = parse_bool(key, value);
  } else if (key == "grid_spacing") {
    cfg.grid_spacing = parse_double(key, value);
  } else if (key == "load") {
    cfg.load = parse_double(key, value);
  } else if (key == "prescribed_delta") {
    cfg.prescribed_delta = parse_double(key, value);
  } else if (key == "area") {
    cfg.area = parse_double(key, value);
  } else if (key == "stabilize") {
    cfg.stabilize = parse_bool(key, value);
  } else if (key == "h_stab") {
    cfg.h_stab = parse_double(key, value);
  } else if (key == "rbf_c") {
    cfg.rbf_c = parse_double(key, value);
  } else if (key == "rbf_augment") {
    cfg.rbf_augment = parse_bool(key, value);
  } else if (key == "sph_h") {
    cfg.sph_h = parse_double(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw ConfigError("unknown config key: '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

namespace {

void mark_failed(RunRecord& rec, const std::string& message, const std::string& stage) {
  double nan = std::numeric_limits<double>::quiet_NaN();
  rec.error = message;
  rec.failed_stage = stage;
  rec.tip_mm = nan;
  rec.errors.rel_l2 = nan;
}

}  // namespace

RunRecord run(const ExperimentConfig& config) {
  RunRecord rec;
  rec.config = config;
  std::string stage = "cloud";
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (config.problem == Problem::Bar1D)
      run_bar(config, rec, stage);
    else
      run_beam(config, rec, stage);
  } catch (const StencilSingularError& e) {
    mark_failed(rec, e.what(), "stencil");
    rec.min_moment_rcond = e.rcond;
  } catch (const UnderdeterminedSupportError& e) {
    mark_failed(rec, e.what(), "stencil");
  } catch (const InsufficientNodesError& e) {
    mark_failed(rec, e.what(), "stencil");
  } catch (const DegenerateSupportError& e) {
    mark_failed(rec, e.what(), "stencil");
  } catch (const SingularSystemError& e) {
    mark_failed(rec, e.what(), "solve");
  } catch (const SolverError& e) {
    mark_failed(rec, e.what(), stage);
  }
  auto t1 = std::chrono::steady_clock::now();
  rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rec;
}

std::vector<RunRecord> sweep_support_size(const ExperimentConfig& config,
                                          const std::vector<int>& n_list) {
  if (n_list.empty()) throw ConfigError("empty support-size sweep list");
  if (config.problem != Problem::Bar1D) throw ConfigError("support-size sweep runs the 1D bar");
  std::vector<RunRecord> records;
  records.reserve(n_list.size());
  for (int n : n_list) {
    ExperimentConfig c = config;
    c.n = n;
    records.push_back(run(c));
  }
  return records;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  if (records.empty()) throw SolverError("no records to emit");
  std::vector<size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    int sa = static_cast<int>(records[a].config.scheme);
    int sb = static_cast<int>(records[b].config.scheme);
    if (sa != sb) return sa < sb;
    return records[a].n_used < records[b].n_used;
  });

  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw IoError("cannot write " + path);
  out << "scheme,mode,n,problem,tip_mm,rel_l2,oscillation_count,min_moment_rcond,global_rcond,"
         "residual,wall_ms\n";
  for (size_t i : idx) {
    const RunRecord& r = records[i];
    out << scheme_name(r.config.scheme) << ',' << mode_name(r.config.mode) << ',' << r.n_used
        << ',' << problem_name(r.config.problem) << ',' << fmt(r.tip_mm) << ','
        << fmt(r.errors.rel_l2) << ',' << r.errors.oscillation_count << ','
        << fmt(r.min_moment_rcond) << ',' << fmt(r.global_rcond) << ',' << fmt(r.residual_norm)
        << ",\n";  // wall_ms stays empty so reruns are byte-identical
  }
  if (!out) throw IoError("write failure on " + path);

  std::ofstream meta(path + ".meta", std::ios::binary);
  if (!meta) throw IoError("cannot write " + path + ".meta");
  meta << "scheme,mode,n,problem,wall_ms,error\n";
  for (size_t i : idx) {
    const RunRecord& r = records[i];
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    char wall[40];
    std::snprintf(wall, sizeof(wall), "%.3f", r.wall_ms);
    meta << scheme_name(r.config.scheme) << ',' << mode_name(r.config.mode) << ',' << r.n_used
         << ',' << problem_name(r.config.problem) << ',' << wall << ',' << err << "\n";
  }
}

void emit_profile(const RunRecord& record, const std::string& path) {
  if (record.errors.profile.empty()) throw SolverError("record has no profile to emit");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& s : record.errors.profile)
    out << fmt(s.position) << ',' << fmt(s.computed) << ',' << fmt(s.reference) << "\n";
  if (!out) throw IoError("write failure on " + path);
}

std::vector<int> table1_support_sizes() { return {3, 5, 10, 15, 20, 30, 40, 50, 60}; }

std::vector<RunRecord> table1(const std::string& out_path) {
  ExperimentConfig cfg;  // defaults are the legacy 100-node bar under end load
  cfg.problem = Problem::Bar1D;
  cfg.scheme = Scheme::FPM;
  cfg.mode = Mode::Legacy;
  cfg.bc = BcKind::EndForce;
  std::vector<RunRecord> records = sweep_support_size(cfg, table1_support_sizes());
  if (!out_path.empty()) emit_csv(records, out_path);
  return records;
}

std::vector<RunRecord> beam3d_fig3(const std::string& out_path, bool full_grid,
                                   bool stabilize_both) {
  ExperimentConfig cfg;
  cfg.problem = Problem::Beam3D;
  cfg.scheme = Scheme::FPM;
  cfg.mode = Mode::Corrected;
  cfg.bc = BcKind::EndForce;
  cfg.full_grid = full_grid;
  cfg.stabilize = false;
  std::vector<RunRecord> records;
  records.push_back(run(cfg));
  if (stabilize_both) {
    cfg.stabilize = true;
    records.push_back(run(cfg));
  }
  if (!out_path.empty()) emit_csv(records, out_path);
  return records;
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::FPM: return "fpm";
    case Scheme::PPCM: return "ppcm";
    case Scheme::RPCM: return "rpcm";
    case Scheme::SPH: return "sph";
  }
  return "?";
}

const char* mode_name(Mode m) { return m == Mode::Legacy ? "legacy" : "corrected"; }

const char* problem_name(Problem p) { return p == Problem::Bar1D ? "bar1d" : "beam3d"; }

}  // namespace starcol
