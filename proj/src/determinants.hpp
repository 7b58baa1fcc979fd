#pragma once

#include "kernel.hpp"
#include "types.hpp"

namespace dbar::det {

// Tr K = iint tr K(z,z) dA  (same sum as the trace of the discretized operator).
cplx trace_K(const geom::QuadratureGrid& grid, const kernel::KernelPair& p);

struct TraceSequence {
  std::vector<cplx> values;  // Tr(A^n), n = 1..n_max
};

// Traces of powers by repeated multiplication.
TraceSequence trace_powers(const MatrixXcd& A, int n_max);

struct SeriesResult {
  cplx value;         // det2 when converged
  bool converged;
  double tail_bound;  // magnitude of the last retained term of log det2
};

// log det2 = -sum_{n>=2} Tr(A^n)/n, summed with a ratio-test early stop.
// Not converged => caller should fall back to det2_eigen.
SeriesResult det2_series(const TraceSequence& ts);

cplx det2_eigen(const MatrixXcd& A);           // prod (1-lambda) e^lambda
cplx fredholm_det(const MatrixXcd& A);         // det(I - A) via LU
cplx logdet2_lu(const MatrixXcd& A);           // logdet(I-A) + tr A, branch-stable for I-A ~ I

inline cplx trace(const MatrixXcd& A) { return A.trace(); }

}  // namespace dbar::det
