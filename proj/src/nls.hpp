#pragma once

#include <memory>

#include "dbar_core.hpp"
#include "field.hpp"
#include "kernel.hpp"
#include "types.hpp"

namespace dbar::nls {

// Focusing-NLS scenario: M0 = [[0, beta chi_D], [-beta* chi_Dbar, 0]] on D u Dbar,
// dressed with xi = x z + t z^2 (+ t3 z^3), convention e^{-i xi s3} M0 e^{i xi s3}.
struct NLSScenario {
  geom::DomainSpec domain;  // base D in C^+; conjugate_closed is forced on
  field::ScalarProfile beta;
  double x = 0.0;
  double t = 0.0;
  double t3 = 0.0;
  double symmetry_factor = 1.0;  // != 1 deliberately breaks the Schwarz pairing (negative controls)

  cplx xi(cplx z) const { return x * z + t * z * z + t3 * z * z * z; }
  cplx dz_xi(cplx z) const { return x + 2.0 * t * z + 3.0 * t3 * z * z; }
};

// M with entries (1,2): beta e^{-2 i xi} chi_D and (2,1): -beta* e^{2 i xi} chi_Dbar
// (the (2,1) entry scaled by symmetry_factor).
field::MatrixField build_nls_M(const NLSScenario& s);

// Kernel pair (sqrt-beta factorization, 1/sqrt(pi) normalization, dressed): n = 1.
kernel::KernelPair nls_pair(const NLSScenario& s);

struct PsiResult {
  cplx psi;  // 2i (Gamma_1)_{12}
  cplx a;    // (Gamma_1)_{11}
  Mat2 moment1;
};
PsiResult psi_extract(const core::Solution& sol);

// max over mirrored node pairs of ||Gamma(z) - s2 conj(Gamma(conj z)) s2||.
double schwarz_residual(const core::Solution& sol);

struct LaxPair {
  cplx psi;
  cplx dx_psi;
  Mat2 U(cplx z) const;
  Mat2 V(cplx z) const;
};

// Workspace bound to one scenario's grid; re-dresses M per (x, t, t3).
class NLSWorkspace {
 public:
  NLSWorkspace(const NLSScenario& base, int radial_points, int angular_points);

  const core::Workspace& core() const { return *ws_; }
  const NLSScenario& base() const { return base_; }
  core::Solution solve_at(double x, double t, double t3 = 0.0) const;
  cplx psi(double x, double t, double t3 = 0.0) const;

 private:
  NLSScenario base_;
  std::unique_ptr<core::Workspace> ws_;
};

LaxPair lax_matrices(const NLSWorkspace& w, double x, double t, double h_x = 1e-3);

// max over probe z of || FD_t U - FD_x V + [U, V] ||.
double zero_curvature_residual(const NLSWorkspace& w, double x, double t, double h,
                               const std::vector<cplx>& probes = {cplx(1.0, 0.5),
                                                                  cplx(2.0, 1.0)});
// | i psi_t + psi_xx/2 + |psi|^2 psi | at (x, t) by central differences.
double nls_residual(const NLSWorkspace& w, double x, double t, double h);
// | psi_t3 + psi_xxx/4 + (3/2)|psi|^2 psi_x | at (x, t, t3 = 0).
double cmkdv_residual(const NLSWorkspace& w, double x, double t, double h);
// | FD^2_x log det2 - |psi|^2 |.
double det2_psi_check(const NLSWorkspace& w, double x, double t, double h_x);

// Riemann-Hilbert reduction on the mother-body of an ellipse scenario: the 1-D
// Nystrom solve for (A, B) on L u Lbar. Valid for analytic beta and a > b.
class RHReduction {
 public:
  RHReduction(const NLSScenario& s, int n);
  Mat2 evaluate(cplx z) const;  // Gamma-tilde(z), z outside D u Dbar
  cplx psi() const;

 private:
  VectorXcd zL_, zLb_;   // mother-body nodes
  VectorXcd bL_, bLb_;   // absorbed weights (DeltaS beta e^{+-2 i xi} dz / 2 pi i)
  MatrixXcd sol_;        // columns: A1, A2 on L; B1, B2 on Lbar
};

}  // namespace dbar::nls
