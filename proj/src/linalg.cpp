#include "starcol/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace starcol::linalg {

double norm1(const DenseMatrix& A) {
  return LAPACKE_dlange(LAPACK_COL_MAJOR, '1', A.rows(), A.cols(), A.data(), A.rows());
}

LuFactor lu_factor(const DenseMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("lu_factor: matrix not square");
  LuFactor f;
  f.lu = A;
  f.ipiv.resize(A.rows());
  f.info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, A.rows(), A.cols(), f.lu.data(), A.rows(),
                          f.ipiv.data());
  if (f.info < 0) throw std::invalid_argument("lu_factor: bad argument to dgetrf");
  return f;
}

double lu_rcond(const LuFactor& f, double anorm) {
  if (f.info > 0) return 0.0;
  double rcond = 0.0;
  int info = LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', f.lu.rows(), f.lu.data(), f.lu.rows(), anorm,
                            &rcond);
  if (info != 0) throw std::invalid_argument("lu_rcond: dgecon failed");
  return rcond;
}

void lu_solve(const LuFactor& f, std::vector<double>& b, bool transpose) {
  int n = f.lu.rows();
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu_solve: size mismatch");
  int info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, transpose ? 'T' : 'N', n, 1, f.lu.data(), n,
                            f.ipiv.data(), b.data(), n);
  if (info != 0) throw std::invalid_argument("lu_solve: dgetrs failed");
}

DenseMatrix lu_invert(const LuFactor& f) {
  if (f.info > 0) throw std::invalid_argument("lu_invert: singular factorization");
  DenseMatrix inv = f.lu;
  int info = LAPACKE_dgetri(LAPACK_COL_MAJOR, inv.rows(), inv.data(), inv.rows(), f.ipiv.data());
  if (info != 0) throw std::invalid_argument("lu_invert: dgetri failed");
  return inv;
}

DenseMatrix multiply(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("multiply: shape mismatch");
  DenseMatrix C(A.rows(), B.cols());
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, A.rows(), B.cols(), A.cols(), 1.0,
              A.data(), A.rows(), B.data(), B.rows(), 0.0, C.data(), C.rows());
  return C;
}

std::vector<double> multiply_transposed(const DenseMatrix& A, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != A.rows())
    throw std::invalid_argument("multiply_transposed: size mismatch");
  std::vector<double> y(A.cols(), 0.0);
  cblas_dgemv(CblasColMajor, CblasTrans, A.rows(), A.cols(), 1.0, A.data(), A.rows(), x.data(), 1,
              0.0, y.data(), 1);
  return y;
}

std::vector<double> residual(const DenseMatrix& K, const std::vector<double>& u,
                             const std::vector<double>& f, ExecPolicy exec) {
  int n = K.rows();
  std::vector<double> r(n, 0.0);
  auto row_residual = [&](int i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += K(i, j) * u[j];
    r[i] = acc - f[i];
  };
  if (exec == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) row_residual(i);
  } else {
    for (int i = 0; i < n; ++i) row_residual(i);
  }
  return r;
}

double norm2(const std::vector<double>& v) {
  return cblas_dnrm2(static_cast<int>(v.size()), v.data(), 1);
}

bool all_finite(const DenseMatrix& A) {
  const double* p = A.data();
  size_t total = static_cast<size_t>(A.rows()) * A.cols();
  for (size_t i = 0; i < total; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace starcol::linalg
