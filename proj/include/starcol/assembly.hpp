// Global strong-form collocation assembly for the 1D bar (E u'' = 0) and the
// 3D Navier-Cauchy equations, with Dirichlet rows and optionally
// finite-increment-calculus (FIC) stabilized Neumann rows.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "starcol/approx.hpp"
#include "starcol/cloud.hpp"
#include "starcol/linalg.hpp"

namespace starcol {

struct Material {
  double E = 0.0;       // Young's modulus (N/mm^2)
  double nu = 0.0;      // Poisson's ratio
  double lambda = 0.0;  // nu*E/((1+nu)(1-2nu))
  double mu = 0.0;      // E/(2(1+nu))
};

Material make_material(double E, double nu);

enum class Scheme { FPM, PPCM, RPCM, SPH };
enum class Mode { Legacy, Corrected };

struct StencilConfig {
  Scheme scheme = Scheme::FPM;
  int n = 20;  // support size
  Basis basis;
  WeightParams weights;
  ApproxOptions approx;  // coord/eval/floor; derived from Mode by harness
  RbfParams rbf;
  SphParams sph;
  ExecPolicy exec = ExecPolicy::Parallel;
};

struct LinearSystem {
  DenseMatrix K;
  std::vector<double> F;
  int dofs_per_node = 1;  // 3 in 3D, dof = node*dofs_per_node + axis
  std::vector<std::string> warnings;
  std::vector<double> node_moment_rcond;  // per-node local conditioning diagnostic

  int dofs() const { return K.rows(); }
};

// Scheme dispatch: one stencil per requested derivative from one local system.
std::vector<DerivativeStencil> build_stencil_set(const SupportDomain& support,
                                                 const NodeCloud& cloud,
                                                 const std::vector<DerivKey>& derivatives,
                                                 const StencilConfig& cfg);

// Row m = E * (d2/dx2 stencil at node m); F = 0 (no body force).
LinearSystem assemble_bar_1d(const NodeCloud& cloud, const Material& mat, const StencilConfig& cfg);

// Three rows per node: (lambda+mu) grad(div u) + mu lap(u) = 0.
LinearSystem assemble_navier_3d(const NodeCloud& cloud, const Material& mat, const StencilConfig& cfg);

struct DirichletEntry {
  int node = 0;
  int axis = 0;  // 0 in 1D
  double value = 0.0;
};

// Constrained row := unit row, F := value. Idempotent; conflicting duplicate
// values raise a constraint-conflict error.
void apply_dirichlet(LinearSystem& system, const std::vector<DirichletEntry>& entries);

// 1D end-load row: row := E*(du/dx stencil), F := load/area; stabilization
// subtracts (h_stab/2) times the interior row already present, bit-identical
// to the in-place form (row *= -h/2 then += E*d1). h_stab defaults to rmax
// when the rcond floor is disabled and to the nodal spacing otherwise.
void apply_neumann_1d(LinearSystem& system, const NodeCloud& cloud, int node, double load,
                      double area, const Material& mat, const StencilConfig& cfg,
                      bool stabilization, std::optional<double> h_stab = std::nullopt);

// Collocated traction rows t_i = sigma_ij n_j at a boundary node. With
// stabilization, each row gets -(h_stab/2) times the interior Navier row.
void apply_neumann_3d(LinearSystem& system, const NodeCloud& cloud, int node,
                      const std::array<double, 3>& traction, const std::array<double, 3>& normal,
                      const Material& mat, const StencilConfig& cfg, bool stabilization,
                      std::optional<double> h_stab = std::nullopt);

// Concentrated force: the loaded dof keeps its interior equation and F gets
// load/nodal_area (force smeared over the node's tributary area).
void apply_point_load_3d(LinearSystem& system, int node, int axis, double load, double nodal_area);

// Outward unit normal at a grid boundary node: normalized sum of the face
// normals the node lies on (edges/corners resolve to the averaged normal).
std::array<double, 3> resolve_normal(const NodeCloud& cloud, int node);

bool is_boundary_node(const NodeCloud& cloud, int node);

}  // namespace starcol
