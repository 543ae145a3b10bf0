// Derivative stencil construction at a star node under four schemes:
// weighted-least-squares (FPM), square polynomial interpolation (PPCM),
// multiquadric radial-basis interpolation (RPCM), and kernel sums (SPH).
#pragma once

#include <array>
#include <vector>

#include "starcol/cloud.hpp"
#include "starcol/linalg.hpp"

namespace starcol {

// Derivative multi-index: order per axis, total order <= 2. {0,0,0} is the value.
using DerivKey = std::array<int, 3>;

struct Basis {
  int dimension = 1;  // 1 or 3
  int order = 2;      // quadratic; the term tables below are fixed

  int size() const { return dimension == 1 ? 3 : 10; }
  // Monomial exponents of term t, in the fixed order
  // 1D: [1, x, x^2]   3D: [1, x, y, z, x^2, y^2, z^2, xy, yz, xz]
  std::array<int, 3> exponents(int t) const;
  // P(p): all terms evaluated at p.
  std::vector<double> eval(const std::array<double, 3>& p) const;
  // Row of term derivatives d^k P evaluated at p.
  std::vector<double> deriv_row(const DerivKey& k, const std::array<double, 3>& p) const;
};

struct WeightParams {
  double rm_factor = 2.0;   // rm = rm_factor * rmax
  double c_factor = 0.25;   // c  = c_factor  * rmax
  bool unit = false;        // force w = 1 (interpolation-equivalence test hook)
};

// Fixed-weight function: w(d) = (exp(-d^2/c^2) - exp(-rm^2/c^2)) / (1 - exp(-rm^2/c^2)).
double weight(double distance, double rmax, const WeightParams& params);

// Where the basis coordinates sit and where derivative rows are evaluated.
enum class CoordMode { Global, Centered };
// LegacyLast reproduces the replicated code's quirk: first-derivative rows are
// evaluated at the last-visited (farthest) support node instead of the star.
enum class EvalMode { Star, LegacyLast };

struct ApproxOptions {
  CoordMode coord = CoordMode::Global;
  EvalMode eval = EvalMode::Star;
  // Reciprocal-condition floor below which stencils are refused. 0 disables
  // the floor (legacy behavior: invert unconditionally; exact singularity
  // yields NaN coefficients, mirroring inv() on a singular matrix).
  double rcond_floor = 1e-14;
};

struct DerivativeStencil {
  int star = 0;
  std::vector<int> neighbors;
  std::vector<double> coeffs;
  DerivKey derivative = {0, 0, 0};
  double moment_rcond = 0.0;
};

struct MomentSystem {
  DenseMatrix A;  // m x m weighted moment matrix, symmetric
  DenseMatrix B;  // m x n weighted basis over support nodes
};

MomentSystem build_moment_system(const SupportDomain& support, const NodeCloud& cloud,
                                 const Basis& basis, const WeightParams& params,
                                 CoordMode coord = CoordMode::Global);

// Reciprocal 1-norm condition estimate of the moment matrix; 0 if singular.
double moment_rcond(const MomentSystem& system);

DerivativeStencil fpm_stencil(const SupportDomain& support, const NodeCloud& cloud,
                              const Basis& basis, const WeightParams& params,
                              const DerivKey& derivative, const ApproxOptions& opts);

// All requested derivative rows from a single moment factorization.
std::vector<DerivativeStencil> fpm_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                               const Basis& basis, const WeightParams& params,
                                               const std::vector<DerivKey>& derivatives,
                                               const ApproxOptions& opts);

DerivativeStencil ppcm_stencil(const SupportDomain& support, const NodeCloud& cloud,
                               const Basis& basis, const DerivKey& derivative,
                               const ApproxOptions& opts);

std::vector<DerivativeStencil> ppcm_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                                const Basis& basis,
                                                const std::vector<DerivKey>& derivatives,
                                                const ApproxOptions& opts);

struct RbfParams {
  double c_rbf = 3.0;        // multiquadric shape parameter (mm)
  bool augment_const = true; // append the constant row/column (restores zero-sum)
};

DerivativeStencil rpcm_stencil(const SupportDomain& support, const NodeCloud& cloud,
                               const RbfParams& params, const DerivKey& derivative);

std::vector<DerivativeStencil> rpcm_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                                const RbfParams& params,
                                                const std::vector<DerivKey>& derivatives);

struct SphParams {
  double h = 1.3;       // smoothing length (mm)
  double volume = 1.0;  // nodal volume (mm^dim)
};

// Uncorrected kernel-sum stencil: coeff_o = V_o * d^k W(x_star - x_o; h).
// No constant reproduction near boundaries by construction; carries
// moment_rcond = 1 (no matrix is inverted).
DerivativeStencil sph_stencil(const SupportDomain& support, const NodeCloud& cloud,
                              const SphParams& params, const DerivKey& derivative);

std::vector<DerivativeStencil> sph_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                               const SphParams& params,
                                               const std::vector<DerivKey>& derivatives);

}  // namespace starcol
