#include "linalg.hpp"

#include <cmath>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace dbar::lin {

void gauss_legendre(int n, double a, double b, VectorXd& x, VectorXd& w) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "gauss_legendre: n < 1");
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
}

double solve_inplace(MatrixXcd& A, MatrixXcd& B) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (A.cols() != n || B.rows() != n)
    throw Error(ErrorCode::invalid_argument, "solve_inplace: shape mismatch");
  const double anorm = LAPACKE_zlange(LAPACK_COL_MAJOR, '1', n, n, A.data(), n);
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, A.data(), n, ipiv.data());
  if (info != 0)
    throw Error(ErrorCode::solver_failure,
                "dense LU failed (singular factor at " + std::to_string(info) + ")");
  double rcond = 0.0;
  LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, A.data(), n, anorm, &rcond);
  info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, static_cast<lapack_int>(B.cols()), A.data(), n,
                        ipiv.data(), B.data(), n);
  if (info != 0) throw Error(ErrorCode::solver_failure, "dense solve failed");
  return rcond;
}

cplx logdet_I_minus(const MatrixXcd& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  MatrixXcd B = MatrixXcd::Identity(n, n) - A;
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, B.data(), n, ipiv.data());
  if (info != 0) throw Error(ErrorCode::solver_failure, "logdet: singular I - A");
  cplx s = 0.0;
  int swaps = 0;
  for (lapack_int i = 0; i < n; ++i) {
    s += std::log(B(i, i));
    if (ipiv[i] != i + 1) ++swaps;
  }
  if (swaps % 2) s += cplx(0.0, kPi);
  return s;
}

VectorXcd eigenvalues(const MatrixXcd& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  MatrixXcd B = A;
  VectorXcd lam(n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, B.data(), n, lam.data(),
                                        nullptr, 1, nullptr, 1);
  if (info != 0) throw Error(ErrorCode::solver_failure, "zgeev failed");
  return lam;
}

double norm2_estimate(const MatrixXcd& A, int iters) {
  if (A.size() == 0) return 0.0;
  VectorXcd v = VectorXcd::Zero(A.cols());
  for (int i = 0; i < v.size(); ++i) v[i] = cplx(1.0 + 0.37 * ((i * 2654435761u) % 97) / 97.0, 0.2);
  v.normalize();
  double s = 0.0;
  for (int it = 0; it < iters; ++it) {
    VectorXcd w = A.adjoint() * (A * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    s = std::sqrt(nw);
  }
  return s;
}

}  // namespace dbar::lin
