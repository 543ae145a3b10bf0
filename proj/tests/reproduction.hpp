// Randomized polynomial-reproduction harness shared by the unit tests and the
// acceptance gate. Each trial draws a well-separated random support, builds
// every derivative stencil, and checks two properties:
//   - each basis monomial's stencil derivative matches the analytic value to
//     1e-8 relative (denominator max(|exact|, sum |c_o u_o|)), gated on
//     moment rcond > 1e-8;
//   - derivative stencils (order >= 1) have coefficient sums bounded by
//     1e-9 * max|coeff| whenever the scheme reproduces constants (kernel sums
//     do not, so they are exempt and not run here).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "starcol/approx.hpp"
#include "starcol/cloud.hpp"
#include "starcol/errors.hpp"

namespace repro {

struct Stats {
  int supports = 0;             // accepted random supports (floor-passing draws)
  int derivative_checks = 0;
  int skipped_low_rcond = 0;    // stencils below the reproduction gate
  int zero_sum_checks = 0;
  double min_rcond = 1.0;       // over accepted stencils
  double worst_rel = 0.0;
  double worst_zero_sum = 0.0;        // worst |sum c| / max|c| over all stencils
  double worst_zero_sum_gated = 0.0;  // same, restricted to moment rcond > 1e-8
  std::vector<std::string> failures;
};

inline std::vector<starcol::DerivKey> all_keys(int dim) {
  if (dim == 1) return {{{0, 0, 0}}, {{1, 0, 0}}, {{2, 0, 0}}};
  return {{{0, 0, 0}}, {{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}, {{2, 0, 0}},
          {{0, 2, 0}}, {{0, 0, 2}}, {{1, 1, 0}}, {{0, 1, 1}}, {{1, 0, 1}}};
}

inline double monomial(const std::array<int, 3>& e, const std::array<double, 3>& p) {
  auto pw = [](double v, int k) { return k == 0 ? 1.0 : (k == 1 ? v : v * v); };
  return pw(p[0], e[0]) * pw(p[1], e[1]) * pw(p[2], e[2]);
}

// count points in [-1.5, 1.5]^dim with pairwise separation >= minsep;
// node 0 is the star. A partial placement can block every remaining position,
// so the draw restarts from scratch after too many rejected candidates.
inline starcol::NodeCloud random_cloud(int dim, int count, double minsep, std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  starcol::NodeCloud c;
  c.dimension = dim;
  c.grid_shape = {count, 1, 1};
  c.spacing = 0.5;
  int rejected = 0;
  while (static_cast<int>(c.points.size()) < count) {
    std::array<double, 3> p = {coord(rng), 0.0, 0.0};
    if (dim == 3) {
      p[1] = coord(rng);
      p[2] = coord(rng);
    }
    bool ok = true;
    for (const auto& q : c.points) {
      double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
      if (std::sqrt(dx * dx + dy * dy + dz * dz) < minsep) {
        ok = false;
        break;
      }
    }
    if (ok) {
      c.points.push_back(p);
    } else if (++rejected > 200) {
      c.points.clear();
      rejected = 0;
    }
  }
  return c;
}

// 1e-9 where conditioning permits; below that, the forward-error bound of the
// explicit-inverse path, n * eps / rcond (measured violations at rcond ~5e-11
// reach 2e-9, four orders inside this bound).
inline double zero_sum_tol(const starcol::DerivativeStencil& s) {
  double eps = std::numeric_limits<double>::epsilon();
  double mech = static_cast<double>(s.coeffs.size()) * eps / std::max(s.moment_rcond, 1e-300);
  return std::max(1e-9, mech);
}

inline void check_set(Stats& st, const starcol::NodeCloud& cloud,
                      const std::vector<starcol::DerivativeStencil>& set, bool check_derivatives,
                      const char* tag) {
  starcol::Basis basis;
  basis.dimension = cloud.dimension;
  const auto& star_p = cloud.points[set[0].star];
  for (const auto& s : set) {
    int order = s.derivative[0] + s.derivative[1] + s.derivative[2];
    double cmax = 0.0, csum = 0.0;
    for (double c : s.coeffs) {
      cmax = std::max(cmax, std::abs(c));
      csum += c;
    }
    if (order >= 1) {
      ++st.zero_sum_checks;
      double z = cmax > 0.0 ? std::abs(csum) / cmax : std::abs(csum);
      st.worst_zero_sum = std::max(st.worst_zero_sum, z);
      if (s.moment_rcond > 1e-8) st.worst_zero_sum_gated = std::max(st.worst_zero_sum_gated, z);
      if (z > zero_sum_tol(s)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: zero-sum %.3e exceeds %.3e (moment rcond %.3e)",
                      tag, z, zero_sum_tol(s), s.moment_rcond);
        st.failures.push_back(buf);
      }
    }
    if (!check_derivatives) continue;
    st.min_rcond = std::min(st.min_rcond, s.moment_rcond);
    if (s.moment_rcond <= 1e-8) {
      ++st.skipped_low_rcond;
      continue;
    }
    std::vector<double> exact_row = basis.deriv_row(s.derivative, star_p);
    for (int t = 0; t < basis.size(); ++t) {
      double dotv = 0.0, absdot = 0.0;
      for (size_t q = 0; q < s.coeffs.size(); ++q) {
        double u = monomial(basis.exponents(t), cloud.points[s.neighbors[q]]);
        dotv += s.coeffs[q] * u;
        absdot += std::abs(s.coeffs[q] * u);
      }
      double den = std::max(std::abs(exact_row[t]), absdot);
      double rel = den > 0.0 ? std::abs(dotv - exact_row[t]) / den : std::abs(dotv - exact_row[t]);
      ++st.derivative_checks;
      st.worst_rel = std::max(st.worst_rel, rel);
      if (rel > 1e-8)
        st.failures.push_back(std::string(tag) + ": monomial " + std::to_string(t) +
                              " reproduction error " + std::to_string(rel));
    }
  }
}

// One dimension's worth of trials: weighted-least-squares stencils drive the
// support count; square-interpolation and radial stencils piggyback on the
// same clouds.
inline void run_dimension(Stats& st, int dim, int target_supports, unsigned seed) {
  std::mt19937 rng(seed);
  starcol::Basis basis;
  basis.dimension = dim;
  int m = basis.size();
  double minsep = dim == 1 ? 0.3 : 0.35;
  std::uniform_int_distribution<int> extra(0, 6);

  starcol::WeightParams wls_weights;
  starcol::ApproxOptions opts;
  opts.coord = starcol::CoordMode::Centered;
  opts.eval = starcol::EvalMode::Star;
  opts.rcond_floor = 1e-14;
  starcol::RbfParams rbf;
  rbf.c_rbf = 1.5;

  std::vector<starcol::DerivKey> keys = all_keys(dim);
  int attempts = 0, cap = 50 * target_supports;
  while (st.supports < target_supports && ++attempts < cap) {
    int n = m + extra(rng);
    starcol::NodeCloud cloud = random_cloud(dim, n, minsep, rng);
    starcol::SupportDomain sup = starcol::neighbors(cloud, 0, n);
    try {
      auto wls = starcol::fpm_stencil_set(sup, cloud, basis, wls_weights, keys, opts);
      ++st.supports;
      check_set(st, cloud, wls, true, dim == 1 ? "wls-1d" : "wls-3d");
    } catch (const starcol::StencilSingularError&) {
      continue;  // inadmissible draw
    }
    try {
      starcol::SupportDomain supm = starcol::neighbors(cloud, 0, m);
      auto interp = starcol::ppcm_stencil_set(supm, cloud, basis, keys, opts);
      check_set(st, cloud, interp, true, dim == 1 ? "interp-1d" : "interp-3d");
    } catch (const starcol::StencilSingularError&) {
    }
    auto radial = starcol::rpcm_stencil_set(sup, cloud, rbf, keys);
    check_set(st, cloud, radial, false, dim == 1 ? "radial-1d" : "radial-3d");
  }
}

}  // namespace repro
