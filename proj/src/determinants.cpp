#include "determinants.hpp"

#include <cmath>

#include "linalg.hpp"

namespace dbar::det {

cplx trace_K(const geom::QuadratureGrid& grid, const kernel::KernelPair& p) {
  cplx s = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const cplx z = grid.nodes[k];
    s += grid.weights[k] * (p.dzf(z).transpose() * p.g(z)).trace();
  }
  return s;
}

TraceSequence trace_powers(const MatrixXcd& A, int n_max) {
  if (n_max < 2) throw Error(ErrorCode::invalid_argument, "trace_powers: n_max >= 2");
  if (n_max > 200) throw Error(ErrorCode::invalid_argument, "trace_powers: n_max cap exceeded");
  TraceSequence ts;
  ts.values.reserve(n_max);
  MatrixXcd P = A;
  ts.values.push_back(P.trace());
  for (int n = 2; n <= n_max; ++n) {
    P = P * A;
    ts.values.push_back(P.trace());
  }
  return ts;
}

SeriesResult det2_series(const TraceSequence& ts) {
  cplx logdet2 = 0.0;
  // Track the last two nonzero magnitudes: structured operators (e.g. block
  // anti-diagonal ones) have exactly vanishing odd traces, so a single tiny
  // term must not stop the summation.
  double nz_last = 0.0, nz_prev = 0.0;
  int tiny_streak = 0;
  for (size_t i = 1; i < ts.values.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const cplx term = -ts.values[i] / double(n);
    logdet2 += term;
    const double mag = std::abs(term);
    if (mag > 0.0) {
      nz_prev = nz_last;
      nz_last = mag;
    }
    if (mag < 1e-16 * (1.0 + std::abs(logdet2))) {
      if (++tiny_streak >= 2 && i >= 4) break;
    } else {
      tiny_streak = 0;
    }
  }
  // Geometric tail estimate from the observed nonzero-term ratio.
  double tail = nz_last;
  bool converged = nz_last < 1e-14 * (1.0 + std::abs(logdet2));
  if (!converged && nz_prev > 0.0) {
    const double ratio = nz_last / nz_prev;
    if (ratio < 0.9) {
      tail = nz_last * ratio / (1.0 - ratio);
      converged = tail < 1e-10 * (1.0 + std::abs(logdet2));
    }
  }
  return {std::exp(logdet2), converged, tail};
}

cplx det2_eigen(const MatrixXcd& A) {
  const VectorXcd lam = lin::eigenvalues(A);
  cplx logsum = 0.0;
  for (int i = 0; i < lam.size(); ++i) logsum += std::log(1.0 - lam[i]) + lam[i];
  return std::exp(logsum);
}

cplx fredholm_det(const MatrixXcd& A) { return std::exp(lin::logdet_I_minus(A)); }

cplx logdet2_lu(const MatrixXcd& A) { return lin::logdet_I_minus(A) + A.trace(); }

}  // namespace dbar::det
