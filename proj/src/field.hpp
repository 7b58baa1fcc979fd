#pragma once

#include <functional>
#include <optional>

#include "geometry.hpp"
#include "types.hpp"

namespace dbar::field {

// A matrix-valued function on the plane with compact support. Evaluation includes the
// support cutoff (zero outside). Analytic z-derivatives are carried when available;
// dz/dzbar refer to the smooth extension of the values on the support (no boundary layer).
struct MatrixField {
  int rows = 2;
  int cols = 2;
  geom::DomainSpec support;
  std::function<MatrixXcd(cplx)> eval;
  std::function<MatrixXcd(cplx)> dz;      // optional
  std::function<MatrixXcd(cplx)> dzbar;   // optional
  bool traceless = false;
  bool nilpotent = false;
  bool schwarz_symmetric = false;

  MatrixXcd operator()(cplx z) const { return eval(z); }
  bool has_dz() const { return static_cast<bool>(dz); }
};

// Field invariant checks at grid nodes (relative tolerances per the contracts).
double traceless_violation(const MatrixField& f, const geom::QuadratureGrid& g);
double nilpotent_violation(const MatrixField& f, const geom::QuadratureGrid& g);

// Zero field and the constant strictly-upper-triangular test field c*E12 on a domain.
MatrixField zero_field(const geom::DomainSpec& support, int rows = 2, int cols = 2);
MatrixField constant_e12_field(const geom::DomainSpec& support, cplx c);

// Scalar profile builtins (used for beta and for kernel-pair factors).
enum class ProfileKind { constant, gaussian, polynomial };
struct ScalarProfile {
  ProfileKind kind = ProfileKind::constant;
  cplx value{1.0, 0.0};            // constant: value; gaussian: amplitude
  cplx center{0.0, 0.0};           // gaussian / polynomial expansion point
  double width = 1.0;              // gaussian
  std::vector<cplx> coeffs;        // polynomial in (z - center)

  cplx operator()(cplx z) const;
  cplx dz(cplx z) const;           // holomorphic part of the derivative
  bool analytic() const { return kind != ProfileKind::gaussian; }
};

}  // namespace dbar::field
