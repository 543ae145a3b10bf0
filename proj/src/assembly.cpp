#include "starcol/assembly.hpp"

#include <cmath>
#include <exception>

#include "starcol/errors.hpp"

namespace starcol {

namespace {

// Per-node loop with optional OpenMP fan-out. Rows of distinct nodes are
// disjoint, so parallel and serial execution produce identical bits. Errors
// are collected per node and the lowest node index is rethrown.
template <typename Body>
void for_each_node(int N, ExecPolicy exec, Body&& body) {
  std::vector<std::exception_ptr> errors(N);
  if (exec == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int m = 0; m < N; ++m) {
      try {
        body(m);
      } catch (...) {
        errors[m] = std::current_exception();
      }
    }
  } else {
    for (int m = 0; m < N; ++m) {
      try {
        body(m);
      } catch (...) {
        errors[m] = std::current_exception();
      }
    }
  }
  for (int m = 0; m < N; ++m)
    if (errors[m]) std::rethrow_exception(errors[m]);
}

StencilConfig with_cloud_dimension(const StencilConfig& cfg, const NodeCloud& cloud) {
  StencilConfig c = cfg;
  c.basis.dimension = cloud.dimension;
  return c;
}

bool near_unit(const std::array<double, 3>& v) {
  double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return std::abs(len - 1.0) < 1e-12;
}

}  // namespace

Material make_material(double E, double nu) {
  if (!(E > 0.0)) throw SolverError("Young's modulus must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw SolverError("Poisson's ratio must be in [0, 0.5)");
  Material m;
  m.E = E;
  m.nu = nu;
  m.lambda = (nu * E) / ((1.0 + nu) * (1.0 - 2.0 * nu));
  m.mu = E / (2.0 * (1.0 + nu));
  return m;
}

std::vector<DerivativeStencil> build_stencil_set(const SupportDomain& support,
                                                 const NodeCloud& cloud,
                                                 const std::vector<DerivKey>& derivatives,
                                                 const StencilConfig& cfg) {
  switch (cfg.scheme) {
    case Scheme::FPM:
      return fpm_stencil_set(support, cloud, cfg.basis, cfg.weights, derivatives, cfg.approx);
    case Scheme::PPCM:
      return ppcm_stencil_set(support, cloud, cfg.basis, derivatives, cfg.approx);
    case Scheme::RPCM:
      return rpcm_stencil_set(support, cloud, cfg.rbf, derivatives);
    case Scheme::SPH:
      return sph_stencil_set(support, cloud, cfg.sph, derivatives);
  }
  throw SolverError("unknown scheme");
}

LinearSystem assemble_bar_1d(const NodeCloud& cloud, const Material& mat,
                             const StencilConfig& cfg_in) {
  if (cloud.dimension != 1) throw InvalidDiscretizationError("bar assembly needs a 1D cloud");
  StencilConfig cfg = with_cloud_dimension(cfg_in, cloud);
  int N = cloud.count();

  LinearSystem sys;
  sys.K = DenseMatrix(N, N);
  sys.F.assign(N, 0.0);  // no body force
  sys.dofs_per_node = 1;
  sys.node_moment_rcond.assign(N, 1.0);

  for_each_node(N, cfg.exec, [&](int m) {
    SupportDomain support = neighbors(cloud, m, cfg.n);
    auto st = build_stencil_set(support, cloud, {{{2, 0, 0}}}, cfg);
    const auto& s = st[0];
    sys.node_moment_rcond[m] = s.moment_rcond;
    int n = static_cast<int>(s.neighbors.size());
    for (int q = 0; q < n; ++q) sys.K(m, s.neighbors[q]) += mat.E * s.coeffs[q];
  });
  return sys;
}

LinearSystem assemble_navier_3d(const NodeCloud& cloud, const Material& mat,
                                const StencilConfig& cfg_in) {
  if (cloud.dimension != 3) throw InvalidDiscretizationError("Navier assembly needs a 3D cloud");
  StencilConfig cfg = with_cloud_dimension(cfg_in, cloud);
  int N = cloud.count();

  LinearSystem sys;
  sys.K = DenseMatrix(3 * N, 3 * N);
  sys.F.assign(3 * N, 0.0);
  sys.dofs_per_node = 3;
  sys.node_moment_rcond.assign(N, 1.0);

  const std::vector<DerivKey> keys = {{{2, 0, 0}}, {{0, 2, 0}}, {{0, 0, 2}},
                                      {{1, 1, 0}}, {{0, 1, 1}}, {{1, 0, 1}}};
  double lm = mat.lambda + mat.mu;

  for_each_node(N, cfg.exec, [&](int m) {
    SupportDomain support = neighbors(cloud, m, cfg.n);
    auto st = build_stencil_set(support, cloud, keys, cfg);
    sys.node_moment_rcond[m] = st[0].moment_rcond;
    const auto& xx = st[0].coeffs;
    const auto& yy = st[1].coeffs;
    const auto& zz = st[2].coeffs;
    const auto& xy = st[3].coeffs;
    const auto& yz = st[4].coeffs;
    const auto& xz = st[5].coeffs;
    int n = static_cast<int>(support.neighbors.size());
    for (int q = 0; q < n; ++q) {
      int col = 3 * support.neighbors[q];
      double lap = (xx[q] + yy[q]) + zz[q];
      sys.K(3 * m + 0, col + 0) += lm * xx[q] + mat.mu * lap;
      sys.K(3 * m + 0, col + 1) += lm * xy[q];
      sys.K(3 * m + 0, col + 2) += lm * xz[q];
      sys.K(3 * m + 1, col + 0) += lm * xy[q];
      sys.K(3 * m + 1, col + 1) += lm * yy[q] + mat.mu * lap;
      sys.K(3 * m + 1, col + 2) += lm * yz[q];
      sys.K(3 * m + 2, col + 0) += lm * xz[q];
      sys.K(3 * m + 2, col + 1) += lm * yz[q];
      sys.K(3 * m + 2, col + 2) += lm * zz[q] + mat.mu * lap;
    }
  });
  return sys;
}

void apply_dirichlet(LinearSystem& system, const std::vector<DirichletEntry>& entries) {
  int dofs = system.dofs();
  std::vector<std::pair<int, double>> seen;
  for (const auto& e : entries) {
    int dof = e.node * system.dofs_per_node + e.axis;
    if (dof < 0 || dof >= dofs) throw SolverError("Dirichlet dof out of range");
    for (const auto& [d, v] : seen)
      if (d == dof && v != e.value)
        throw ConstraintConflictError("conflicting Dirichlet values on dof " + std::to_string(dof));
    seen.emplace_back(dof, e.value);

    // A dof already reduced to a unit row with a different value is a conflict
    // from an earlier application.
    bool unit_row = system.K(dof, dof) == 1.0;
    if (unit_row) {
      for (int j = 0; j < dofs && unit_row; ++j)
        if (j != dof && system.K(dof, j) != 0.0) unit_row = false;
      if (unit_row && system.F[dof] != e.value)
        throw ConstraintConflictError("conflicting Dirichlet values on dof " + std::to_string(dof));
    }

    for (int j = 0; j < dofs; ++j) system.K(dof, j) = 0.0;
    system.K(dof, dof) = 1.0;
    system.F[dof] = e.value;
  }
}

void apply_neumann_1d(LinearSystem& system, const NodeCloud& cloud, int node, double load,
                      double area, const Material& mat, const StencilConfig& cfg_in,
                      bool stabilization, std::optional<double> h_stab) {
  StencilConfig cfg = with_cloud_dimension(cfg_in, cloud);
  if (!is_boundary_node(cloud, node))
    system.warnings.push_back("Neumann condition on interior node " + std::to_string(node));

  SupportDomain support = neighbors(cloud, node, cfg.n);
  auto st = build_stencil_set(support, cloud, {{{1, 0, 0}}, {{2, 0, 0}}}, cfg);
  const auto& d1 = st[0].coeffs;
  system.node_moment_rcond[node] = std::min(system.node_moment_rcond[node], st[0].moment_rcond);
  int n = static_cast<int>(support.neighbors.size());

  bool legacy = cfg.approx.rcond_floor == 0.0;
  double h = h_stab.value_or(legacy ? support.rmax : cloud.spacing);

  // Interior-row bits at the support columns; the stabilized row is exactly
  // E*(du/dx row) - (h/2)*(interior row).
  std::vector<double> interior(n);
  for (int q = 0; q < n; ++q) interior[q] = system.K(node, support.neighbors[q]);

  for (int j = 0; j < system.dofs(); ++j) system.K(node, j) = 0.0;
  for (int q = 0; q < n; ++q) system.K(node, support.neighbors[q]) = mat.E * d1[q];
  if (stabilization)
    for (int q = 0; q < n; ++q)
      system.K(node, support.neighbors[q]) -= 0.5 * h * interior[q];
  system.F[node] = load / area;
}

void apply_neumann_3d(LinearSystem& system, const NodeCloud& cloud, int node,
                      const std::array<double, 3>& traction, const std::array<double, 3>& normal,
                      const Material& mat, const StencilConfig& cfg_in, bool stabilization,
                      std::optional<double> h_stab) {
  StencilConfig cfg = with_cloud_dimension(cfg_in, cloud);
  if (!near_unit(normal)) throw DegenerateNormalError("traction row needs a unit normal");
  if (!is_boundary_node(cloud, node))
    system.warnings.push_back("traction row on interior node " + std::to_string(node));

  SupportDomain support = neighbors(cloud, node, cfg.n);
  auto st = build_stencil_set(support, cloud, {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}, cfg);
  const std::vector<double>* D[3] = {&st[0].coeffs, &st[1].coeffs, &st[2].coeffs};
  system.node_moment_rcond[node] = std::min(system.node_moment_rcond[node], st[0].moment_rcond);
  int n = static_cast<int>(support.neighbors.size());

  bool legacy = cfg.approx.rcond_floor == 0.0;
  double h = h_stab.value_or(legacy ? support.rmax : cloud.spacing);

  // capture the interior Navier rows before replacement
  std::vector<std::vector<double>> interior(3, std::vector<double>(3 * n));
  for (int i = 0; i < 3; ++i)
    for (int q = 0; q < n; ++q)
      for (int a = 0; a < 3; ++a)
        interior[i][3 * q + a] = system.K(3 * node + i, 3 * support.neighbors[q] + a);

  for (int i = 0; i < 3; ++i) {
    int row = 3 * node + i;
    for (int j = 0; j < system.dofs(); ++j) system.K(row, j) = 0.0;
    for (int q = 0; q < n; ++q) {
      double ndotD = normal[0] * (*D[0])[q] + normal[1] * (*D[1])[q] + normal[2] * (*D[2])[q];
      for (int a = 0; a < 3; ++a) {
        // t_i = sigma_ij n_j with sigma = lambda tr(eps) I + 2 mu eps
        double val = mat.lambda * normal[i] * (*D[a])[q] + mat.mu * normal[a] * (*D[i])[q];
        if (a == i) val += mat.mu * ndotD;
        system.K(row, 3 * support.neighbors[q] + a) = val;
      }
    }
    if (stabilization)
      for (int q = 0; q < n; ++q)
        for (int a = 0; a < 3; ++a)
          system.K(row, 3 * support.neighbors[q] + a) -= 0.5 * h * interior[i][3 * q + a];
    system.F[row] = traction[i];
  }
}

void apply_point_load_3d(LinearSystem& system, int node, int axis, double load,
                         double nodal_area) {
  if (!(nodal_area > 0.0)) throw SolverError("point load needs a positive nodal area");
  system.F[node * system.dofs_per_node + axis] += load / nodal_area;
}

bool is_boundary_node(const NodeCloud& cloud, int node) {
  int nz = cloud.grid_shape[2], ny = cloud.grid_shape[1], nx = cloud.grid_shape[0];
  int k = node % nz, j = (node / nz) % ny, i = node / (ny * nz);
  int idx[3] = {i, j, k};
  int ext[3] = {nx, ny, nz};
  for (int a = 0; a < 3; ++a)
    if (ext[a] > 1 && (idx[a] == 0 || idx[a] == ext[a] - 1)) return true;
  return false;
}

std::array<double, 3> resolve_normal(const NodeCloud& cloud, int node) {
  int nz = cloud.grid_shape[2], ny = cloud.grid_shape[1], nx = cloud.grid_shape[0];
  int k = node % nz, j = (node / nz) % ny, i = node / (ny * nz);
  int idx[3] = {i, j, k};
  int ext[3] = {nx, ny, nz};
  // sum of adjacent face normals; axes of extent 1 have no outward direction
  std::array<double, 3> nsum = {0.0, 0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    if (ext[a] <= 1) continue;
    if (idx[a] == 0) nsum[a] -= 1.0;
    if (idx[a] == ext[a] - 1) nsum[a] += 1.0;
  }
  double len = std::sqrt(nsum[0] * nsum[0] + nsum[1] * nsum[1] + nsum[2] * nsum[2]);
  if (len == 0.0) throw DegenerateNormalError("node " + std::to_string(node) + " has no outward normal");
  return {nsum[0] / len, nsum[1] / len, nsum[2] / len};
}

}  // namespace starcol
