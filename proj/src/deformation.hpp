#pragma once

#include <optional>
#include <vector>

#include "dbar_core.hpp"
#include "determinants.hpp"
#include "field.hpp"
#include "kernel.hpp"
#include "types.hpp"

namespace dbar::deform {

using TimeVector = std::vector<cplx>;  // t_1 .. t_J

inline constexpr int kMaxTimes = 8;

cplx xi_phase(cplx z, const TimeVector& t);
cplx dz_xi_phase(cplx z, const TimeVector& t);

// M(z,t) = e^{xi s3/2} M0 e^{-xi s3/2}: off-diagonal entries scaled by e^{+-xi}.
field::MatrixField dress(const field::MatrixField& M0, const TimeVector& t,
                         double overflow_guard = 50.0);

// Analytic t_j-derivative of the dressed field: (z^j/2)[sigma3, M].
field::MatrixField dt_M(const field::MatrixField& M0, const TimeVector& t, int j);

// Exact rational Miwa shift of a field: t -> t + sign [zeta^{-1}] conjugates
// M by (1 - z/zeta)^{-sign*sigma3/2}. Requires zeta outside the support.
field::MatrixField miwa_shift_M(const field::MatrixField& M, cplx zeta, int sign);

// Dressed / Miwa-shifted kernel pairs (same conjugations applied to f and g).
kernel::KernelPair dress_pair(const kernel::KernelPair& p, const TimeVector& t);
kernel::KernelPair miwa_shift_pair(const kernel::KernelPair& p, cplx zeta, int sign);

struct DeformationState {
  const core::Workspace* ws = nullptr;
  field::MatrixField M0;  // 2x2 traceless
  TimeVector t;
  cplx log_tau{0.0, 0.0};

  DeformationState(const core::Workspace& w, field::MatrixField m0, TimeVector t0)
      : ws(&w), M0(std::move(m0)), t(std::move(t0)) {}
  const core::Solution& solution();
  void set_time(const TimeVector& nt);

 private:
  std::optional<core::Solution> cached_;
};

// omega_j = -(1/pi) iint tr(Gamma^{-1} dzGamma dt_j M) dA, for j = 1..jmax.
VectorXcd malgrange_components(DeformationState& st, int jmax);
cplx malgrange_component(DeformationState& st, int j);

// Gauss quadrature of sum_j omega_j dt_j along one segment (Gamma re-solved per point).
cplx tau_log_increment_segment(DeformationState& st, const TimeVector& t_from,
                               const TimeVector& t_to, int gauss_points = 8);
// Polyline version; accumulates into st.log_tau and leaves st at the final time.
cplx tau_along_path(DeformationState& st, const std::vector<TimeVector>& path,
                    int gauss_points = 8);

// Residual of Gamma(., t - sign [zeta^{-1}]) == C Gamma D^{-1} at probe points.
double connection_check(DeformationState& st, cplx zeta, int sign);

enum class GammaForm {
  boundary_corrected,  // (1/pi) iint (M0)_{11}/(z - zeta) dA  (distributional d_z, default)
  classical,           // (1/pi) iint log(zeta/(zeta-z)) (d_z M0)_{11} dA
};
cplx gamma_fn(const field::MatrixField& M0, const core::Workspace& ws, cplx zeta,
              GammaForm form = GammaForm::boundary_corrected);

struct TauRatioResult {
  cplx lhs;  // det2(shifted)/det2(base)
  cplx rhs;  // Gamma_11(zeta) e^{gamma} (minus shift) or Gamma_22(zeta) e^{-gamma} (plus)
  double rel_error;
};
TauRatioResult tau_ratio_check(const core::Workspace& ws, const kernel::KernelPair& base_pair,
                               const TimeVector& t, cplx zeta, int sign);

// (1/2 pi i) oint_{|z|=R} Gamma_12(z, t) Gamma_21(z, s) dz (trapezoid, n points).
cplx hirota_residue(const core::Workspace& ws, const field::MatrixField& M0, const TimeVector& t,
                    const TimeVector& s, double R, int n_contour = 256);

enum class LogTauRoute { det2_lu, path_integration };

// log tau on the KP stencil and the FD residual of
//   3 u_22 - d1(4 u_3 - u_111 - 6 u u_1) = 0,  u = 2 d1^2 log tau.
double kp_residual(const core::Workspace& ws, const kernel::KernelPair& base_pair,
                   const TimeVector& t0, double h, LogTauRoute route = LogTauRoute::det2_lu);
std::vector<double> kp_residual_sequence(const core::Workspace& ws,
                                         const kernel::KernelPair& base_pair,
                                         const TimeVector& t0, double h0, int halvings,
                                         LogTauRoute route = LogTauRoute::det2_lu);

}  // namespace dbar::deform
