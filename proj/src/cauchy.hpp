#pragma once

#include <memory>
#include <vector>

#include "geometry.hpp"
#include "types.hpp"

namespace dbar::cauchy {

// Product quadratures for the solid Cauchy transform over a grid:
//
//   C[phi](z) = (1/pi) iint phi(w)/(w - z) dA(w),      dbar_z C = -phi on the support,
//   D[phi](z) = (1/pi) iint phi(w)/(w - z)^2 dA(w)  =  d/dz C[phi](z).
//
// Disk components use an exact-per-mode rule (Fourier in angle x partial radial
// moments of the interpolant against the kernel), which handles targets on, inside
// and outside the component with spectral accuracy. Cross-component blocks are the
// plain rule (the integrand is smooth there). Ellipse same-component blocks fall
// back to a punctured rule with the closed-form Cauchy transform of 1 subtracted;
// they never sit on an accuracy-critical path (see geometry of the scenarios).
class CauchyOp {
 public:
  explicit CauchyOp(const geom::QuadratureGrid& grid);
  ~CauchyOp();

  const geom::QuadratureGrid& grid() const { return *grid_; }

  // N x N weight matrices: value(z_j) = sum_k W(j,k) phi(z_k).
  const MatrixXcd& weak() const;
  const MatrixXcd& strong() const;

  // Weight rows for an arbitrary target (any z in the plane, nodes included).
  RowVectorXcd weak_row(cplx z) const;
  RowVectorXcd strong_row(cplx z) const;

 private:
  struct DiskModes;
  const geom::QuadratureGrid* grid_;
  std::vector<std::unique_ptr<DiskModes>> modes_;  // per component; null for ellipses
  mutable MatrixXcd weak_, strong_;
  mutable bool weak_built_ = false, strong_built_ = false;

  void plain_block(int target_comp, int source_comp, MatrixXcd& out, bool strong) const;
  void ellipse_self_block(int comp, MatrixXcd& out, bool strong) const;
};

}  // namespace dbar::cauchy
