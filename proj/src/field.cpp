#include "field.hpp"

#include <cmath>

namespace dbar::field {

double traceless_violation(const MatrixField& f, const geom::QuadratureGrid& g) {
  double worst = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    const MatrixXcd M = f(g.nodes[k]);
    const double n = M.norm();
    if (n == 0.0) continue;
    worst = std::max(worst, std::abs(M.trace()) / n);
  }
  return worst;
}

double nilpotent_violation(const MatrixField& f, const geom::QuadratureGrid& g) {
  double worst = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    const MatrixXcd M = f(g.nodes[k]);
    const double n = M.norm();
    if (n == 0.0) continue;
    worst = std::max(worst, (M * M).norm() / (n * n));
  }
  return worst;
}

MatrixField zero_field(const geom::DomainSpec& support, int rows, int cols) {
  MatrixField f;
  f.rows = rows;
  f.cols = cols;
  f.support = support;
  f.eval = [rows, cols](cplx) -> MatrixXcd { return MatrixXcd::Zero(rows, cols); };
  f.dz = f.eval;
  f.dzbar = f.eval;
  f.traceless = true;
  f.nilpotent = true;
  return f;
}

MatrixField constant_e12_field(const geom::DomainSpec& support, cplx c) {
  MatrixField f;
  f.support = support;
  f.eval = [support, c](cplx z) {
    MatrixXcd M = MatrixXcd::Zero(2, 2);
    if (support.contains(z)) M(0, 1) = c;
    return M;
  };
  f.dz = [support](cplx) -> MatrixXcd { return MatrixXcd::Zero(2, 2); };
  f.dzbar = f.dz;
  f.traceless = true;
  f.nilpotent = true;
  return f;
}

cplx ScalarProfile::operator()(cplx z) const {
  switch (kind) {
    case ProfileKind::constant:
      return value;
    case ProfileKind::gaussian: {
      const double d2 = std::norm(z - center);
      return value * std::exp(-d2 / (width * width));
    }
    case ProfileKind::polynomial: {
      cplx acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * (z - center) + *it;
      return acc;
    }
  }
  throw Error(ErrorCode::internal, "ScalarProfile: bad kind");
}

cplx ScalarProfile::dz(cplx z) const {
  switch (kind) {
    case ProfileKind::constant:
      return 0.0;
    case ProfileKind::gaussian:
      // d/dz exp(-(z-c)(zbar-cbar)/w^2) = -(zbar-cbar)/w^2 * value
      return -(std::conj(z - center)) / (width * width) * (*this)(z);
    case ProfileKind::polynomial: {
      cplx acc = 0.0;
      for (size_t i = coeffs.size(); i-- > 1;) acc = acc * (z - center) + double(i) * coeffs[i];
      return acc;
    }
  }
  throw Error(ErrorCode::internal, "ScalarProfile: bad kind");
}

}  // namespace dbar::field
