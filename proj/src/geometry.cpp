#include "geometry.hpp"

#include <cmath>
#include <ostream>

#include "linalg.hpp"

namespace dbar::geom {

namespace {

cplx binom_sum_centered(double a, double b, int p, int q) {
  // iint z^p conj(z)^q dA over centered, unrotated ellipse.
  // z = lambda (A u + B / u), |u| = 1, A = (a+b)/2, B = (a-b)/2.
  const double A = 0.5 * (a + b), B = 0.5 * (a - b);
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  double angular = 0.0;
  for (int m = 0; m <= p; ++m) {
    for (int l = 0; l <= q; ++l) {
      // u-power: m - (p-m) + (q-l) - l = 2m - p + q - 2l; need 0
      if (2 * m - p + q - 2 * l != 0) continue;
      angular += binom(p, m) * std::pow(A, m) * std::pow(B, p - m) * binom(q, l) *
                 std::pow(A, l) * std::pow(B, q - l);
    }
  }
  return 2.0 * kPi * a * b / (p + q + 2) * angular;
}

}  // namespace

bool ComponentSpec::contains(cplx z) const {
  cplx w = z - center;
  if (mirror) w = std::conj(w);
  const cplx u = std::polar(1.0, -rotation) * w;
  const double x = u.real() / a, y = u.imag() / b;
  return x * x + y * y <= 1.0;
}

cplx ComponentSpec::map(double lambda, double theta) const {
  const cplx u(a * lambda * std::cos(theta), b * lambda * std::sin(theta));
  cplx z = std::polar(1.0, rotation) * u;
  if (mirror) z = std::conj(z);
  return center + z;
}

void DomainSpec::validate() const {
  auto check_axes = [](double aa, double bb, const char* which) {
    if (!(aa > 0.0) || !(bb > 0.0))
      throw Error(ErrorCode::invalid_argument,
                  std::string("domain: degenerate semi-axes in ") + which);
  };
  check_axes(a, b, "base component");
  if (kind == DomainKind::disk && a != b)
    throw Error(ErrorCode::invalid_argument, "domain: disk requires a == b");
  if (kind == DomainKind::union_of_two) check_axes(a2, b2, "second component");
  if (conjugate_closed) {
    ComponentSpec base{center, a, b, rotation, false};
    double clearance = center.imag() - base.radius_bound();
    if (kind == DomainKind::union_of_two)
      clearance = std::min(clearance, center2.imag() - std::max(a2, b2));
    if (!(clearance > 0.0))
      throw Error(ErrorCode::invalid_argument,
                  "domain: conjugate_closed component must lie strictly in the upper half-plane");
  }
  // disjointness of distinct components via bounding circles
  const auto cs = components();
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i + 1; j < cs.size(); ++j) {
      const double sep = std::abs(cs[i].center - cs[j].center) -
                         cs[i].radius_bound() - cs[j].radius_bound();
      if (!(sep > 0.0))
        throw Error(ErrorCode::invalid_argument, "domain: components must be disjoint");
    }
}

double DomainSpec::area() const {
  double s = kPi * a * b;
  if (kind == DomainKind::union_of_two) s += kPi * a2 * b2;
  if (conjugate_closed) s *= 2.0;
  return s;
}

bool DomainSpec::contains(cplx z) const {
  for (const auto& c : components())
    if (c.contains(z)) return true;
  return false;
}

double DomainSpec::diameter_bound() const {
  double r = 0.0;
  for (const auto& c : components()) r = std::max(r, std::abs(c.center) + c.radius_bound());
  return 2.0 * r;
}

std::vector<ComponentSpec> DomainSpec::components() const {
  std::vector<ComponentSpec> out;
  out.push_back({center, a, b, rotation, false});
  if (kind == DomainKind::union_of_two) out.push_back({center2, a2, b2, rotation2, false});
  if (conjugate_closed) {
    const size_t nbase = out.size();
    for (size_t i = 0; i < nbase; ++i) {
      ComponentSpec m = out[i];
      m.center = std::conj(m.center);
      m.mirror = true;
      out.push_back(m);
    }
  }
  return out;
}

int QuadratureGrid::component_of(int k) const {
  for (size_t c = 0; c < comps.size(); ++c) {
    if (k >= comps[c].offset && k < comps[c].offset + comps[c].nodes.size()) return (int)c;
  }
  throw Error(ErrorCode::internal, "component_of: index out of range");
}

int QuadratureGrid::conj_index(int k) const {
  if (!domain.conjugate_closed)
    throw Error(ErrorCode::invalid_argument, "conj_index: grid is not conjugate-closed");
  const int nc = static_cast<int>(comps.size());
  const int c = component_of(k);
  const int partner = (c + nc / 2) % nc;
  return comps[partner].offset + (k - comps[c].offset);
}

void QuadratureGrid::export_csv(std::ostream& os) const {
  os << "re,im,weight\n";
  os.precision(17);
  for (int k = 0; k < size(); ++k)
    os << nodes[k].real() << "," << nodes[k].imag() << "," << weights[k] << "\n";
}

QuadratureGrid build_grid(const DomainSpec& domain, int radial_points, int angular_points,
                          double theta0) {
  if (radial_points < 2 || angular_points < 4)
    throw Error(ErrorCode::invalid_argument, "build_grid: need radial_points>=2, angular_points>=4");
  if (angular_points % 2)
    throw Error(ErrorCode::invalid_argument, "build_grid: angular_points must be even");
  domain.validate();

  QuadratureGrid g;
  g.domain = domain;
  const auto specs = domain.components();
  const int nr = radial_points, nt = angular_points;
  int offset = 0;
  for (const auto& cs : specs) {
    GridComponent gc;
    gc.spec = cs;
    gc.nr = nr;
    gc.nt = nt;
    lin::gauss_legendre(nr, 0.0, 1.0, gc.lambda, gc.wlambda);
    gc.theta.resize(nt);
    gc.nodes.resize(nr * nt);
    gc.weights.resize(nr * nt);
    const double dtheta = 2.0 * kPi / nt;
    for (int l = 0; l < nt; ++l) {
      const double th = theta0 + l * dtheta;
      gc.theta[l] = cs.mirror ? -th : th;
    }
    for (int i = 0; i < nr; ++i) {
      for (int l = 0; l < nt; ++l) {
        const double th = theta0 + l * dtheta;
        gc.nodes[i * nt + l] = cs.map(gc.lambda[i], th);
        gc.weights[i * nt + l] = cs.a * cs.b * gc.lambda[i] * gc.wlambda[i] * dtheta;
      }
    }
    gc.offset = offset;
    offset += nr * nt;
    g.comps.push_back(std::move(gc));
  }
  g.nodes.resize(offset);
  g.weights.resize(offset);
  for (const auto& gc : g.comps) {
    g.nodes.segment(gc.offset, gc.nodes.size()) = gc.nodes;
    g.weights.segment(gc.offset, gc.weights.size()) = gc.weights;
  }
  // For conjugate-closed grids, make the mirror node sets exactly conjugate.
  if (domain.conjugate_closed) {
    const int half = offset / 2;
    for (int k = 0; k < half; ++k) g.nodes[half + k] = std::conj(g.nodes[k]);
    for (auto& gc : g.comps)
      if (gc.spec.mirror) gc.nodes = g.nodes.segment(gc.offset, gc.nodes.size());
  }
  // Node-collision guard.
  const double min_sep = 1e-12 * domain.diameter_bound();
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      if (std::abs(g.nodes[i] - g.nodes[j]) <= min_sep)
        throw Error(ErrorCode::invalid_argument, "build_grid: node collision");
  return g;
}

ContourGrid boundary_contour(const DomainSpec& domain, int n) {
  domain.validate();
  const ComponentSpec cs = domain.components().front();
  ContourGrid c;
  c.nodes.resize(n);
  c.dz.resize(n);
  const double dt = 2.0 * kPi / n;
  const cplx rot = std::polar(1.0, cs.rotation);
  for (int k = 0; k < n; ++k) {
    const double th = k * dt;
    cplx z = rot * cplx(cs.a * std::cos(th), cs.b * std::sin(th));
    cplx dzd = rot * cplx(-cs.a * std::sin(th), cs.b * std::cos(th));
    if (cs.mirror) {
      z = std::conj(z);
      dzd = std::conj(dzd);
    }
    c.nodes[k] = cs.center + z;
    c.dz[k] = dzd * dt;
  }
  c.anticlockwise = !cs.mirror;
  return c;
}

ContourGrid circle_contour(cplx center, double R, int n) {
  DomainSpec d;
  d.kind = DomainKind::disk;
  d.center = center;
  d.a = d.b = R;
  return boundary_contour(d, n);
}

cplx schwarz_ellipse(double a, double b, cplx z) {
  if (!(a > b && b > 0.0))
    throw Error(ErrorCode::invalid_argument, "schwarz_ellipse: requires a > b > 0");
  const double c2 = a * a - b * b;
  const double c = std::sqrt(c2);
  if (z.imag() == 0.0 && std::abs(z.real()) < c)
    throw Error(ErrorCode::invalid_argument, "schwarz_ellipse: z on the focal segment");
  // s(z) = z sqrt(1 - c^2/z^2), principal branch: cut exactly on [-c, c].
  const cplx s = z * std::sqrt(1.0 - c2 / (z * z));
  return ((a * a + b * b) * z - 2.0 * a * b * s) / c2;
}

cplx schwarz_function(const ComponentSpec& cs, cplx z) {
  cplx w = z - cs.center;
  if (cs.mirror) w = std::conj(w);
  w *= std::polar(1.0, -cs.rotation);
  cplx s = schwarz_ellipse(cs.a, cs.b, w);
  s *= std::polar(1.0, -cs.rotation);
  s += std::conj(cs.center);
  if (cs.mirror) s = std::conj(s);
  return s;
}

ContourGrid mother_body(double a, double b, int n) {
  ComponentSpec cs;
  cs.a = a;
  cs.b = b;
  return mother_body(cs, n);
}

ContourGrid mother_body(const ComponentSpec& cs, int n) {
  const double a = cs.a, b = cs.b;
  if (!(a > b && b > 0.0))
    throw Error(ErrorCode::invalid_argument,
                "mother_body: requires a > b > 0 (circle degenerates to a point)");
  const double c = std::sqrt(a * a - b * b);
  ContourGrid g;
  g.nodes.resize(n);
  g.dz.resize(n);
  g.jump.resize(n);
  g.closed = false;
  const cplx rot = std::polar(1.0, cs.rotation);
  for (int k = 1; k <= n; ++k) {
    const double th = kPi * k / (n + 1);
    const double x = c * std::cos(th);
    // Delta S fixed so that (1/2 pi i) oint h DeltaS dz = (1/pi) iint h dA.
    cplx jump = cplx(0.0, 4.0 * a * b / (c * c)) * std::sqrt(c * c - x * x);
    cplx wgt = cplx(0.0, 4.0 * kPi * a * b / (n + 1)) * std::sin(th) * std::sin(th);
    cplx z = rot * cplx(x, 0.0);
    jump = jump * std::conj(rot);   // S rotates with e^{-i rot}; dz weight: rot cancels conj(rot)
    if (cs.mirror) {
      z = std::conj(z);
      jump = std::conj(jump);
      wgt = -std::conj(wgt);
    }
    g.nodes[k - 1] = cs.center + z;
    g.jump[k - 1] = jump;
    g.dz[k - 1] = wgt;
  }
  return g;
}

cplx component_moment(const ComponentSpec& cs, int p, int q) {
  // iint z^p conj(z)^q dA with z = center + e^{i rot} w (mirror: conjugate everything at the end).
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  cplx total = 0.0;
  const cplx c0 = cs.mirror ? std::conj(cs.center) : cs.center;
  const double rot = cs.rotation;
  for (int j = 0; j <= p; ++j) {
    for (int k = 0; k <= q; ++k) {
      const cplx base = binom_sum_centered(cs.a, cs.b, j, k);
      const cplx phase = std::polar(1.0, rot * (j - k));
      total += binom(p, j) * binom(q, k) * std::pow(c0, p - j) * std::pow(std::conj(c0), q - k) *
               phase * base;
    }
  }
  return cs.mirror ? std::conj(total) : total;
}

}  // namespace dbar::geom
