#pragma once

#include <iosfwd>
#include <vector>

#include "types.hpp"

namespace dbar::geom {

enum class DomainKind { disk, ellipse, union_of_two };

// One elliptical (or circular) piece of a domain. `mirror` marks components obtained
// by conjugating a base component of a conjugate-closed domain.
struct ComponentSpec {
  cplx center{0.0, 0.0};
  double a = 1.0;
  double b = 1.0;
  double rotation = 0.0;
  bool mirror = false;

  bool is_disk() const { return a == b; }
  double area() const { return kPi * a * b; }
  double radius_bound() const { return a > b ? a : b; }
  bool contains(cplx z) const;
  // z = center + e^{i rot}(a u + i b v) for u^2+v^2 <= 1 (mirror: conjugate of the base map).
  cplx map(double lambda, double theta) const;
};

struct DomainSpec {
  DomainKind kind = DomainKind::disk;
  cplx center{0.0, 0.0};
  double a = 1.0;
  double b = 1.0;
  double rotation = 0.0;
  bool conjugate_closed = false;
  // Second piece, used only for kind == union_of_two.
  cplx center2{0.0, 0.0};
  double a2 = 0.0;
  double b2 = 0.0;
  double rotation2 = 0.0;

  void validate() const;
  double area() const;
  bool contains(cplx z) const;
  double diameter_bound() const;
  std::vector<ComponentSpec> components() const;
};

// Grid component: tensor rule lambda (Gauss-Legendre on (0,1)) x equispaced angles.
struct GridComponent {
  ComponentSpec spec;
  int nr = 0;
  int nt = 0;
  VectorXd lambda;    // radial parameter nodes in (0,1)
  VectorXd wlambda;   // Gauss-Legendre weights on [0,1]
  VectorXd theta;     // signed angles; equispaced, descending for mirror components
  VectorXcd nodes;    // nr*nt nodes, index i*nt + l
  VectorXd weights;   // matching area weights
  int offset = 0;     // index of first node in the flat grid
};

struct QuadratureGrid {
  DomainSpec domain;
  std::vector<GridComponent> comps;
  VectorXcd nodes;
  VectorXd weights;

  int size() const { return static_cast<int>(nodes.size()); }
  // Index of the conjugate node (requires domain.conjugate_closed).
  int conj_index(int k) const;
  int component_of(int k) const;
  void export_csv(std::ostream& os) const;
};

QuadratureGrid build_grid(const DomainSpec& domain, int radial_points, int angular_points,
                          double theta0 = 0.0);

struct ContourGrid {
  VectorXcd nodes;
  VectorXcd dz;        // complex weights: sum f(nodes) .* dz  ~  contour integral of f dz
  bool closed = true;
  bool anticlockwise = true;
  VectorXcd jump;      // mother-body only: Delta S at the nodes
};

// Anticlockwise boundary of the base component, periodic-trapezoid weights.
ContourGrid boundary_contour(const DomainSpec& domain, int n);
ContourGrid circle_contour(cplx center, double R, int n);

// Schwarz function of the centered, axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1 (a > b > 0):
// S(z) = ((a^2+b^2) z - 2ab s(z))/c^2, s(z) ~ z at infinity, c^2 = a^2 - b^2.
cplx schwarz_ellipse(double a, double b, cplx z);
// Same for a placed component (center/rotation; mirror handled by conjugation).
cplx schwarz_function(const ComponentSpec& cs, cplx z);

// Mother-body of the centered ellipse: the focal segment [-c, c] with Chebyshev(2nd kind)
// nodes; dz weights absorb Delta S = (4 i a b/c^2) sqrt(c^2-x^2) so that
// (1/2 pi i) sum h(nodes).*dz = (1/pi) iint_E h dA for analytic h.
ContourGrid mother_body(double a, double b, int n);
// Placed variant for a component spec (rotation + translation; mirror conjugates).
ContourGrid mother_body(const ComponentSpec& cs, int n);

// Closed-form moments iint z^p conj(z)^q dA over a placed component (test oracle helper).
cplx component_moment(const ComponentSpec& cs, int p, int q);

}  // namespace dbar::geom
