#pragma once

#include "types.hpp"

namespace dbar::lin {

// Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, VectorXd& x, VectorXd& w);

// Solves A X = B with a dense LU (A and B are overwritten; X ends up in B).
// Returns the reciprocal condition estimate of A in the 1-norm.
double solve_inplace(MatrixXcd& A, MatrixXcd& B);

// log det(I - A), principal-branch sum over LU pivots. Suitable whenever I - A is
// not close to singular along the relevant parameter range.
cplx logdet_I_minus(const MatrixXcd& A);

// Eigenvalues of a general complex matrix (LAPACK zgeev, no vectors).
VectorXcd eigenvalues(const MatrixXcd& A);

// 2-norm estimate by power iteration on A^H A. Deterministic start vector.
double norm2_estimate(const MatrixXcd& A, int iters = 40);

}  // namespace dbar::lin
