#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "cauchy.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "types.hpp"

namespace dbar::core {

struct SolveOptions {
  double rcond_min = 1e-13;  // below this, Id - K is reported non-invertible
};

// Grid plus its (cached) Cauchy quadratures; the unit every solve runs against.
// The grid lives behind a stable heap address so workspaces can be moved around.
class Workspace {
 public:
  explicit Workspace(geom::QuadratureGrid g)
      : grid_(std::make_unique<geom::QuadratureGrid>(std::move(g))),
        cauchy_(std::make_unique<cauchy::CauchyOp>(*grid_)) {}
  const geom::QuadratureGrid& grid() const { return *grid_; }
  const cauchy::CauchyOp& cauchy() const { return *cauchy_; }
  int size() const { return grid_->size(); }

 private:
  std::unique_ptr<geom::QuadratureGrid> grid_;
  std::unique_ptr<cauchy::CauchyOp> cauchy_;
};

// Discrete solution of Gamma(z) = I - (1/pi) iint Gamma(w) M(w) / (w - z) dA(w).
class Solution {
 public:
  Solution(const Workspace& ws, field::MatrixField M, std::vector<Mat2> values, double rcond);

  const Workspace& workspace() const { return *ws_; }
  const field::MatrixField& source() const { return M_; }
  const Mat2& value(int node) const { return values_[node]; }
  const std::vector<Mat2>& values() const { return values_; }
  double rcond() const { return rcond_; }

  // Asymptotic moments: Gamma(z) = I + moment1/z + moment2/z^2 + ...
  Mat2 moment1() const;
  Mat2 moment2() const;

  Mat2 evaluate(cplx z) const;       // off-grid or at nodes (product rule everywhere)
  Mat2 z_derivative(cplx z) const;   // d/dz Gamma
  std::vector<Mat2> z_derivative_at_nodes() const;

  // Gamma(z_k) M(z_k) per node (cached at construction).
  const std::vector<Mat2>& gm() const { return gm_; }

  void export_csv(std::ostream& os) const;

 private:
  const Workspace* ws_;
  field::MatrixField M_;
  std::vector<Mat2> values_;
  std::vector<Mat2> gm_;
  double rcond_ = 1.0;
  // flattened GM entry columns for fast row contraction
  MatrixXcd gm_cols_;  // N x 4, column (i*2+j) holds (GM)_{ij}
};

Solution solve(const Workspace& ws, const field::MatrixField& M, const SolveOptions& opts = {});

// max_k |det Gamma(z_k) - 1|
double unimodularity_residual(const Solution& s);

// max over interior nodes of ||dbar Gamma - Gamma M|| with dbar from a local
// least-squares polynomial stencil in (z, zbar). A consistency diagnostic.
double dbar_residual(const Solution& s);

}  // namespace dbar::core
