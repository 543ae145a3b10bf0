#include "starcol/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "starcol/errors.hpp"

namespace starcol {

NodeCloud generate_grid_1d(double length, int count) {
  if (count < 2) throw InvalidDiscretizationError("1D grid needs at least 2 points");
  if (!(length > 0.0)) throw InvalidDiscretizationError("1D grid needs positive length");
  NodeCloud cloud;
  cloud.dimension = 1;
  cloud.grid_shape = {count, 1, 1};
  cloud.origin = {0.0, 0.0, 0.0};
  cloud.spacing = length / (count - 1);
  cloud.points.resize(count);
  for (int i = 0; i < count; ++i) cloud.points[i] = {i * cloud.spacing, 0.0, 0.0};
  cloud.points[count - 1][0] = length;  // endpoint exact, linspace-style
  return cloud;
}

NodeCloud generate_grid_3d(int nx, int ny, int nz, double spacing, std::array<double, 3> origin) {
  if (nx < 1 || ny < 1 || nz < 1) throw InvalidDiscretizationError("3D grid needs positive counts");
  if (!(spacing > 0.0)) throw InvalidDiscretizationError("3D grid needs positive spacing");
  NodeCloud cloud;
  cloud.dimension = 3;
  cloud.grid_shape = {nx, ny, nz};
  cloud.origin = origin;
  cloud.spacing = spacing;
  cloud.points.reserve(static_cast<size_t>(nx) * ny * nz);
  // i over x outermost, k over z innermost: flattened index (i*ny + j)*nz + k.
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k)
        cloud.points.push_back(
            {origin[0] + i * spacing, origin[1] + j * spacing, origin[2] + k * spacing});
  return cloud;
}

double distance(const NodeCloud& cloud, int a, int b) {
  const auto& p = cloud.points[a];
  const auto& q = cloud.points[b];
  double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

SupportDomain neighbors(const NodeCloud& cloud, int star, int n) {
  int N = cloud.count();
  if (star < 0 || star >= N) throw InsufficientNodesError("star node out of range");
  if (n < 1) throw InsufficientNodesError("support size must be positive");
  if (n > N) throw InsufficientNodesError("support size exceeds node count");

  std::vector<double> dist(N);
  for (int i = 0; i < N; ++i) dist[i] = distance(cloud, i, star);

  // stable sort on distance only: equal distances keep ascending node index.
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return dist[a] < dist[b]; });

  SupportDomain s;
  s.star = star;
  s.neighbors.assign(idx.begin(), idx.begin() + n);
  s.distances.resize(n);
  for (int o = 0; o < n; ++o) s.distances[o] = dist[s.neighbors[o]];
  s.rmax = s.distances[n - 1];
  return s;
}

int grid_index(const NodeCloud& cloud, int i, int j, int k) {
  return (i * cloud.grid_shape[1] + j) * cloud.grid_shape[2] + k;
}

}  // namespace starcol
