// Column-major dense matrix plus thin LAPACK/BLAS wrappers. All heavy
// numerics route through LAPACKE so the arithmetic matches the classic
// inv()/backslash semantics the legacy mode replicates.
#pragma once

#include <cstddef>
#include <vector>

namespace starcol {

enum class ExecPolicy { Serial, Parallel };

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(j) * rows_ + i]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(j) * rows_ + i]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

namespace linalg {

// One-norm (maximum absolute column sum).
double norm1(const DenseMatrix& A);

struct LuFactor {
  DenseMatrix lu;
  std::vector<int> ipiv;
  int info = 0;  // > 0: exact zero pivot at that column
};

LuFactor lu_factor(const DenseMatrix& A);

// Reciprocal 1-norm condition estimate from a factorization; 0 if singular.
double lu_rcond(const LuFactor& f, double anorm);

// Solve A x = b (or A^T x = b) in place using a factorization.
void lu_solve(const LuFactor& f, std::vector<double>& b, bool transpose = false);

// Explicit inverse via dgetri; factorization must be nonsingular.
DenseMatrix lu_invert(const LuFactor& f);

// C = A * B (dgemm).
DenseMatrix multiply(const DenseMatrix& A, const DenseMatrix& B);

// y = A^T x (dgemv, transposed) -- a derivative row against a coefficient block.
std::vector<double> multiply_transposed(const DenseMatrix& A, const std::vector<double>& x);

// r = K u - f. Row-parallel kernel with a serial reference path.
std::vector<double> residual(const DenseMatrix& K, const std::vector<double>& u,
                             const std::vector<double>& f, ExecPolicy exec);

double norm2(const std::vector<double>& v);

bool all_finite(const DenseMatrix& A);
bool all_finite(const std::vector<double>& v);

}  // namespace linalg
}  // namespace starcol
