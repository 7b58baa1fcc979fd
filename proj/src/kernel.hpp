#pragma once

#include <functional>

#include "dbar_core.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "types.hpp"

namespace dbar::kernel {

// Kernel pair (f, g), r x n matrix fields with f^T g == 0 and (dbar f)^T g == 0 on the
// support, generating K(z,w) = f^T(z) g(w)/(z-w) and M = pi f g^T chi.
struct KernelPair {
  int r = 2;
  int n = 1;
  geom::DomainSpec support;
  std::function<MatrixXcd(cplx)> f;    // r x n, cutoff included
  std::function<MatrixXcd(cplx)> g;
  std::function<MatrixXcd(cplx)> dzf;  // holomorphic part of df/dz (smooth extension)
  std::function<MatrixXcd(cplx)> dzbarf;  // optional; null means analytically zero
};

// Builtin: f = s (p(z), q(z))^T, g = s (q(z), -p(z))^T on `dom`, s = sqrt(c/pi).
// M0 = c [[pq, -p^2], [q^2, -pq]] (traceless, nilpotent, rank one).
KernelPair poly_pair(const geom::DomainSpec& dom, cplx c, const field::ScalarProfile& p,
                     const field::ScalarProfile& q);

// Builtin: constant directions f = s(1,0)^T, g = s(0,1)^T: K == 0, M = c E12 chi.
KernelPair constant_nilpotent_pair(const geom::DomainSpec& dom, cplx c);

// Builtin: tabulated pair values at the nodes of a given grid (r = 2, n = 1).
// fvals/gvals: one 2-vector per node. Evaluation snaps to the nearest node and
// rejects off-grid points; dz f comes from a local least-squares stencil, so the
// diagonal kernel values carry the stencil's accuracy, not spectral accuracy.
KernelPair table_pair(const geom::QuadratureGrid& grid, std::vector<Vec2> fvals,
                      std::vector<Vec2> gvals);

// Hypothesis checks (constraints of the pair at the grid nodes); returns worst violation.
double pair_constraint_violation(const KernelPair& p, const geom::QuadratureGrid& grid);
// Throws with the offending node index when a constraint is violated beyond tol.
void require_valid_pair(const KernelPair& p, const geom::QuadratureGrid& grid,
                        double tol = 1e-12);

MatrixXcd kernel_eval(const KernelPair& p, cplx z, cplx w);

field::MatrixField m_from_pair(const KernelPair& p);

struct DiscreteOperator {
  MatrixXcd A;  // (n N) x (n N), symmetric sqrt(w) weighting
  int n = 1;
  const geom::QuadratureGrid* grid = nullptr;
};

DiscreteOperator discretize(const KernelPair& p, const geom::QuadratureGrid& grid);

// Resolvent kernel R(z,w) = f^T(z) Gamma^T(z) (Gamma^T(w))^{-1} g(w)/(z-w).
MatrixXcd resolvent_eval(const KernelPair& p, const core::Solution& s, cplx z, cplx w);

// Discretized resolvent with the same weighting as discretize().
DiscreteOperator discretize_resolvent(const KernelPair& p, const core::Solution& s);

// || R K - R + K ||_2 on the discretization.
double resolvent_identity_residual(const KernelPair& p, const core::Solution& s,
                                   const geom::QuadratureGrid& grid);

}  // namespace dbar::kernel
