#include "starcol/approx.hpp"

#include <cmath>
#include <limits>

#include "starcol/errors.hpp"

namespace starcol {

namespace {

// d^k/dp^k of p^e for quadratic terms (e, k in 0..2), exact in fp.
double dmono(int e, int k, double p) {
  static const double falling[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 2}};
  if (k > e) return 0.0;
  int rem = e - k;
  double v = rem == 0 ? 1.0 : (rem == 1 ? p : p * p);
  return falling[e][k] * v;
}

int deriv_order(const DerivKey& k) { return k[0] + k[1] + k[2]; }

std::array<double, 3> shifted(const NodeCloud& cloud, int node, const std::array<double, 3>& shift) {
  const auto& p = cloud.points[node];
  return {p[0] - shift[0], p[1] - shift[1], p[2] - shift[2]};
}

std::array<double, 3> coord_shift(const SupportDomain& support, const NodeCloud& cloud,
                                  CoordMode coord) {
  if (coord == CoordMode::Centered) return cloud.points[support.star];
  return {0.0, 0.0, 0.0};
}

// Evaluation point for derivative rows: the star, or (legacy quirk) the
// last-visited support node, which is the farthest one after the distance sort.
std::array<double, 3> eval_point(const SupportDomain& support, const NodeCloud& cloud,
                                 const ApproxOptions& opts, const std::array<double, 3>& shift) {
  int node = opts.eval == EvalMode::LegacyLast ? support.neighbors.back() : support.star;
  return shifted(cloud, node, shift);
}

std::vector<DerivativeStencil> nan_stencils(const SupportDomain& support,
                                            const std::vector<DerivKey>& derivatives, int n) {
  // Unconditional-inversion semantics on an exactly singular local matrix:
  // coefficients degenerate to NaN and the zero rcond is carried along.
  std::vector<DerivativeStencil> out;
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& d : derivatives) {
    DerivativeStencil s;
    s.star = support.star;
    s.neighbors = support.neighbors;
    s.coeffs.assign(n, nan);
    s.derivative = d;
    s.moment_rcond = 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::array<int, 3> Basis::exponents(int t) const {
  static const std::array<int, 3> table1d[3] = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  static const std::array<int, 3> table3d[10] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                                {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0},
                                                {0, 1, 1}, {1, 0, 1}};
  return dimension == 1 ? table1d[t] : table3d[t];
}

std::vector<double> Basis::eval(const std::array<double, 3>& p) const {
  return deriv_row({0, 0, 0}, p);
}

std::vector<double> Basis::deriv_row(const DerivKey& k, const std::array<double, 3>& p) const {
  int m = size();
  std::vector<double> row(m);
  for (int t = 0; t < m; ++t) {
    auto e = exponents(t);
    row[t] = dmono(e[0], k[0], p[0]) * dmono(e[1], k[1], p[1]) * dmono(e[2], k[2], p[2]);
  }
  return row;
}

double weight(double distance, double rmax, const WeightParams& params) {
  if (params.unit) return 1.0;  // forced unit weights need no length scale
  if (!(rmax > 0.0)) throw DegenerateSupportError("weight: rmax must be positive");
  double rm = params.rm_factor * rmax;
  double c = params.c_factor * rmax;
  double c2 = c * c;
  double tail = std::exp(-(rm * rm) / c2);
  return (std::exp(-(distance * distance) / c2) - tail) / (1.0 - tail);
}

MomentSystem build_moment_system(const SupportDomain& support, const NodeCloud& cloud,
                                 const Basis& basis, const WeightParams& params, CoordMode coord) {
  int n = static_cast<int>(support.neighbors.size());
  int m = basis.size();
  auto shift = coord_shift(support, cloud, coord);

  MomentSystem sys;
  sys.A = DenseMatrix(m, m);
  sys.B = DenseMatrix(m, n);
  for (int o = 0; o < n; ++o) {
    double w = weight(support.distances[o], support.rmax, params);
    std::vector<double> P = basis.eval(shifted(cloud, support.neighbors[o], shift));
    // outer product rounded before the weight scalar: A += w * (P P^T)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) sys.A(i, j) += w * (P[i] * P[j]);
    for (int i = 0; i < m; ++i) sys.B(i, o) = w * P[i];
  }
  return sys;
}

double moment_rcond(const MomentSystem& system) {
  double anorm = linalg::norm1(system.A);
  auto f = linalg::lu_factor(system.A);
  if (f.info > 0) return 0.0;
  return linalg::lu_rcond(f, anorm);
}

std::vector<DerivativeStencil> fpm_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                               const Basis& basis, const WeightParams& params,
                                               const std::vector<DerivKey>& derivatives,
                                               const ApproxOptions& opts) {
  int n = static_cast<int>(support.neighbors.size());
  if (n < basis.size())
    throw UnderdeterminedSupportError("weighted least squares needs support size >= basis terms");
  MomentSystem sys = build_moment_system(support, cloud, basis, params, opts.coord);

  double anorm = linalg::norm1(sys.A);
  auto f = linalg::lu_factor(sys.A);
  double rcond = f.info > 0 ? 0.0 : linalg::lu_rcond(f, anorm);
  if (opts.rcond_floor > 0.0 && (f.info > 0 || rcond < opts.rcond_floor))
    throw StencilSingularError(support.star, rcond);
  if (f.info > 0) return nan_stencils(support, derivatives, n);

  DenseMatrix C = linalg::multiply(linalg::lu_invert(f), sys.B);  // inv(A) * B
  auto shift = coord_shift(support, cloud, opts.coord);
  auto ep = eval_point(support, cloud, opts, shift);

  std::vector<DerivativeStencil> out;
  for (const auto& d : derivatives) {
    DerivativeStencil s;
    s.star = support.star;
    s.neighbors = support.neighbors;
    s.coeffs = linalg::multiply_transposed(C, basis.deriv_row(d, ep));
    s.derivative = d;
    s.moment_rcond = rcond;
    out.push_back(std::move(s));
  }
  return out;
}

DerivativeStencil fpm_stencil(const SupportDomain& support, const NodeCloud& cloud,
                              const Basis& basis, const WeightParams& params,
                              const DerivKey& derivative, const ApproxOptions& opts) {
  return fpm_stencil_set(support, cloud, basis, params, {derivative}, opts)[0];
}

std::vector<DerivativeStencil> ppcm_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                                const Basis& basis,
                                                const std::vector<DerivKey>& derivatives,
                                                const ApproxOptions& opts) {
  int n = static_cast<int>(support.neighbors.size());
  int m = basis.size();
  if (n != m)
    throw UnderdeterminedSupportError("square interpolation requires support size == basis terms");
  auto shift = coord_shift(support, cloud, opts.coord);

  DenseMatrix P(n, m);  // row o = basis at support node o
  for (int o = 0; o < n; ++o) {
    std::vector<double> row = basis.eval(shifted(cloud, support.neighbors[o], shift));
    for (int t = 0; t < m; ++t) P(o, t) = row[t];
  }

  double anorm = linalg::norm1(P);
  auto f = linalg::lu_factor(P);
  double rcond = f.info > 0 ? 0.0 : linalg::lu_rcond(f, anorm);
  if (opts.rcond_floor > 0.0 && (f.info > 0 || rcond < opts.rcond_floor))
    throw StencilSingularError(support.star, rcond);
  if (f.info > 0) return nan_stencils(support, derivatives, n);

  auto ep = eval_point(support, cloud, opts, shift);
  std::vector<DerivativeStencil> out;
  for (const auto& d : derivatives) {
    DerivativeStencil s;
    s.star = support.star;
    s.neighbors = support.neighbors;
    s.coeffs = basis.deriv_row(d, ep);
    linalg::lu_solve(f, s.coeffs, /*transpose=*/true);  // P^T c = d
    s.derivative = d;
    s.moment_rcond = rcond;
    out.push_back(std::move(s));
  }
  return out;
}

DerivativeStencil ppcm_stencil(const SupportDomain& support, const NodeCloud& cloud,
                               const Basis& basis, const DerivKey& derivative,
                               const ApproxOptions& opts) {
  return ppcm_stencil_set(support, cloud, basis, {derivative}, opts)[0];
}

namespace {

// Derivatives of the multiquadric phi(r) = sqrt(r^2 + c^2) as a function of
// delta = x_star - x_j, for total order <= 2.
double mq_deriv(const DerivKey& k, const std::array<double, 3>& delta, double c) {
  double r2 = delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2];
  double phi = std::sqrt(r2 + c * c);
  int order = deriv_order(k);
  if (order == 0) return phi;
  if (order == 1) {
    for (int i = 0; i < 3; ++i)
      if (k[i] == 1) return delta[i] / phi;
  }
  // order 2: identify the two axes (equal for pure derivatives)
  int a = -1, b = -1;
  for (int i = 0; i < 3; ++i) {
    if (k[i] == 2) { a = b = i; break; }
    if (k[i] == 1) { (a < 0 ? a : b) = i; }
  }
  double phi3 = phi * phi * phi;
  double val = -(delta[a] * delta[b]) / phi3;
  if (a == b) val += 1.0 / phi;
  return val;
}

}  // namespace

std::vector<DerivativeStencil> rpcm_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                                const RbfParams& params,
                                                const std::vector<DerivKey>& derivatives) {
  int n = static_cast<int>(support.neighbors.size());
  if (n < 2) throw InsufficientNodesError("radial interpolation needs at least 2 nodes");
  if (params.c_rbf < 0.0) throw InvalidKernelError("negative shape parameter");
  double c = params.c_rbf;
  int dim = n + (params.augment_const ? 1 : 0);

  DenseMatrix M(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double r = distance(cloud, support.neighbors[i], support.neighbors[j]);
      M(i, j) = std::sqrt(r * r + c * c);
    }
  if (params.augment_const) {
    for (int i = 0; i < n; ++i) {
      M(i, n) = 1.0;
      M(n, i) = 1.0;
    }
    M(n, n) = 0.0;
  }

  double anorm = linalg::norm1(M);
  auto f = linalg::lu_factor(M);
  if (f.info > 0) throw StencilSingularError(support.star, 0.0);
  double rcond = linalg::lu_rcond(f, anorm);

  const auto& star = cloud.points[support.star];
  std::vector<DerivativeStencil> out;
  for (const auto& d : derivatives) {
    std::vector<double> rhs(dim, 0.0);
    for (int j = 0; j < n; ++j) {
      const auto& q = cloud.points[support.neighbors[j]];
      std::array<double, 3> delta = {star[0] - q[0], star[1] - q[1], star[2] - q[2]};
      rhs[j] = mq_deriv(d, delta, c);
    }
    if (params.augment_const) rhs[n] = deriv_order(d) == 0 ? 1.0 : 0.0;
    linalg::lu_solve(f, rhs);
    DerivativeStencil s;
    s.star = support.star;
    s.neighbors = support.neighbors;
    s.coeffs.assign(rhs.begin(), rhs.begin() + n);
    s.derivative = d;
    s.moment_rcond = rcond;
    out.push_back(std::move(s));
  }
  return out;
}

DerivativeStencil rpcm_stencil(const SupportDomain& support, const NodeCloud& cloud,
                               const RbfParams& params, const DerivKey& derivative) {
  return rpcm_stencil_set(support, cloud, params, {derivative})[0];
}

namespace {

// Cubic-spline kernel profile and its radial derivatives, q = r/h.
double spline_f(double q) {
  if (q <= 1.0) return 1.0 - 1.5 * q * q + 0.75 * q * q * q;
  if (q <= 2.0) { double t = 2.0 - q; return 0.25 * t * t * t; }
  return 0.0;
}
double spline_df(double q) {
  if (q <= 1.0) return -3.0 * q + 2.25 * q * q;
  if (q <= 2.0) { double t = 2.0 - q; return -0.75 * t * t; }
  return 0.0;
}
double spline_ddf(double q) {
  if (q <= 1.0) return -3.0 + 4.5 * q;
  if (q <= 2.0) return 1.5 * (2.0 - q);
  return 0.0;
}

}  // namespace

std::vector<DerivativeStencil> sph_stencil_set(const SupportDomain& support, const NodeCloud& cloud,
                                               const SphParams& params,
                                               const std::vector<DerivKey>& derivatives) {
  if (!(params.h > 0.0)) throw InvalidKernelError("smoothing length must be positive");
  if (!(params.volume > 0.0)) throw InvalidKernelError("nodal volume must be positive");
  int n = static_cast<int>(support.neighbors.size());
  int dim = cloud.dimension;
  double h = params.h;
  double sigma = dim == 1 ? 2.0 / 3.0 : 1.0 / M_PI;
  double norm0 = sigma / (dim == 1 ? h : h * h * h);

  const auto& star = cloud.points[support.star];
  std::vector<DerivativeStencil> out;
  for (const auto& d : derivatives) {
    int order = deriv_order(d);
    DerivativeStencil s;
    s.star = support.star;
    s.neighbors = support.neighbors;
    s.coeffs.resize(n);
    s.derivative = d;
    s.moment_rcond = 1.0;  // kernel sums involve no inversion
    for (int o = 0; o < n; ++o) {
      const auto& p = cloud.points[support.neighbors[o]];
      std::array<double, 3> delta = {star[0] - p[0], star[1] - p[1], star[2] - p[2]};
      double r = support.distances[o];
      double q = r / h;
      double val = 0.0;
      if (order == 0) {
        val = norm0 * spline_f(q);
      } else if (order == 1) {
        int axis = d[0] == 1 ? 0 : (d[1] == 1 ? 1 : 2);
        val = r == 0.0 ? 0.0 : norm0 * spline_df(q) * delta[axis] / (r * h);
      } else {
        int a = -1, b = -1;
        for (int i = 0; i < 3; ++i) {
          if (d[i] == 2) { a = b = i; break; }
          if (d[i] == 1) { (a < 0 ? a : b) = i; }
        }
        double norm2 = norm0 / (h * h);
        if (q == 0.0) {
          val = a == b ? norm2 * spline_ddf(0.0) : 0.0;
        } else {
          double fp_over_q = spline_df(q) / q;
          val = norm2 * ((spline_ddf(q) - fp_over_q) * (delta[a] * delta[b]) / (r * r));
          if (a == b) val += norm2 * fp_over_q;
        }
      }
      s.coeffs[o] = params.volume * val;
    }
    out.push_back(std::move(s));
  }
  return out;
}

DerivativeStencil sph_stencil(const SupportDomain& support, const NodeCloud& cloud,
                              const SphParams& params, const DerivKey& derivative) {
  return sph_stencil_set(support, cloud, params, {derivative})[0];
}

}  // namespace starcol
