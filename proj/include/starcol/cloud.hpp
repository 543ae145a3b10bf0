// Structured node clouds and deterministic nearest-neighbor support selection.
#pragma once

#include <array>
#include <vector>

namespace starcol {

struct NodeCloud {
  int dimension = 1;                            // 1 or 3
  std::array<int, 3> grid_shape = {0, 1, 1};    // counts per axis
  std::array<double, 3> origin = {0.0, 0.0, 0.0};
  double spacing = 1.0;
  std::vector<std::array<double, 3>> points;    // unused axes held at 0

  int count() const { return static_cast<int>(points.size()); }
};

struct SupportDomain {
  int star = 0;
  std::vector<int> neighbors;     // sorted ascending by distance, ties by index
  std::vector<double> distances;  // matching, nondecreasing
  double rmax = 0.0;              // distance to the n-th neighbor
};

// count equally spaced points on [0, length]; endpoint lands exactly on length.
NodeCloud generate_grid_1d(double length, int count);

// nx*ny*nz points; flattened index runs i (x) outermost, k (z) innermost.
NodeCloud generate_grid_3d(int nx, int ny, int nz, double spacing, std::array<double, 3> origin);

// n nearest nodes by Euclidean distance (stable ascending-index tie-break).
SupportDomain neighbors(const NodeCloud& cloud, int star, int n);

double distance(const NodeCloud& cloud, int a, int b);

// Flattened index of grid coordinate (i,j,k), all 0-based.
int grid_index(const NodeCloud& cloud, int i, int j, int k);

}  // namespace starcol
