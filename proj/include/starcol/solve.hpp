// Dense LU solve with conditioning and residual diagnostics. The reciprocal
// condition number is a first-class output: conditioning-driven failure is the
// phenomenon this library exists to measure.
#pragma once

#include <string>
#include <vector>

#include "starcol/assembly.hpp"

namespace starcol {

struct Solution {
  std::vector<double> u;
  double global_rcond = 0.0;
  double residual_norm = 0.0;  // ||K u - F||_2 against the original K
  std::vector<std::string> pivot_warnings;
};

// LU with partial pivoting. Exact singularity raises; near-singularity solves
// anyway and records rcond (legacy semantics). A non-finite K (possible after
// legacy-mode singular stencils) yields a NaN solution plus a warning instead
// of an exception, mirroring a direct solve on a garbage matrix.
Solution solve_dense(const LinearSystem& system, ExecPolicy exec = ExecPolicy::Parallel);

// Reciprocal 1-norm condition estimate; 0 for exactly singular.
double rcond_estimate(const DenseMatrix& K);

}  // namespace starcol
