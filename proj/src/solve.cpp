#include "starcol/solve.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

#include "starcol/errors.hpp"

namespace starcol {

Solution solve_dense(const LinearSystem& system, ExecPolicy exec) {
  Solution sol;
  int n = system.dofs();
  if (n == 0) throw SolverError("empty system");
  if (static_cast<int>(system.F.size()) != n) throw SolverError("rhs size mismatch");

  if (!linalg::all_finite(system.K) || !linalg::all_finite(system.F)) {
    sol.u.assign(n, std::numeric_limits<double>::quiet_NaN());
    sol.global_rcond = 0.0;
    sol.residual_norm = std::numeric_limits<double>::quiet_NaN();
    sol.pivot_warnings.push_back("system contains non-finite entries; solution is NaN");
    return sol;
  }

  double anorm = linalg::norm1(system.K);
  linalg::LuFactor lu = linalg::lu_factor(system.K);
  if (lu.info > 0)
    throw SingularSystemError("global matrix is exactly singular (pivot " +
                              std::to_string(lu.info) + ")");
  sol.global_rcond = linalg::lu_rcond(lu, anorm);
  if (sol.global_rcond < DBL_EPSILON)
    sol.pivot_warnings.push_back("global matrix is numerically singular (rcond " +
                                 std::to_string(sol.global_rcond) + "); solving anyway");

  sol.u = system.F;
  linalg::lu_solve(lu, sol.u);

  std::vector<double> r = linalg::residual(system.K, sol.u, system.F, exec);
  sol.residual_norm = linalg::norm2(r);
  return sol;
}

double rcond_estimate(const DenseMatrix& K) {
  double anorm = linalg::norm1(K);
  linalg::LuFactor lu = linalg::lu_factor(K);
  if (lu.info > 0) return 0.0;
  return linalg::lu_rcond(lu, anorm);
}

}  // namespace starcol
