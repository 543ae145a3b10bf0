// Hand-built clouds for stencil tests; grid metadata is filled so neighbor
// selection works, but boundary classification is only meaningful for the
// generated grids.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "starcol/cloud.hpp"

namespace testutil {

inline starcol::NodeCloud line_cloud(const std::vector<double>& xs, double spacing = 1.0) {
  starcol::NodeCloud c;
  c.dimension = 1;
  c.grid_shape = {static_cast<int>(xs.size()), 1, 1};
  c.spacing = spacing;
  for (double x : xs) c.points.push_back({x, 0.0, 0.0});
  return c;
}

inline starcol::NodeCloud cloud3(const std::vector<std::array<double, 3>>& ps,
                                 double spacing = 1.0) {
  starcol::NodeCloud c;
  c.dimension = 3;
  c.grid_shape = {static_cast<int>(ps.size()), 1, 1};
  c.spacing = spacing;
  c.points = ps;
  return c;
}

// The ten-point lattice {0,1,2}^3 subset on which the quadratic 3D basis is
// unisolvent (Vandermonde determinant 8).
inline starcol::NodeCloud unisolvent10() {
  return cloud3({{{0, 0, 0}},
                 {{1, 0, 0}},
                 {{0, 1, 0}},
                 {{0, 0, 1}},
                 {{2, 0, 0}},
                 {{0, 2, 0}},
                 {{0, 0, 2}},
                 {{1, 1, 0}},
                 {{0, 1, 1}},
                 {{1, 0, 1}}});
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace testutil
