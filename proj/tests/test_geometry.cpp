#include <cmath>
#include <sstream>

#include "doctest.h"
#include "geometry.hpp"

using namespace dbar;
using namespace dbar::geom;

namespace {
DomainSpec disk(cplx c, double r) {
  DomainSpec d;
  d.kind = DomainKind::disk;
  d.center = c;
  d.a = d.b = r;
  return d;
}
DomainSpec ellipse(cplx c, double a, double b, double rot = 0.0) {
  DomainSpec d;
  d.kind = DomainKind::ellipse;
  d.center = c;
  d.a = a;
  d.b = b;
  d.rotation = rot;
  return d;
}
}  // namespace

TEST_CASE("grid weights sum to the area") {
  auto g = build_grid(disk(0.0, 1.0), 20, 40);
  CHECK(std::abs(g.weights.sum() - kPi) <= 1e-12 * kPi);
  auto ge = build_grid(ellipse(0.0, 2.0, 1.0), 20, 40);
  CHECK(std::abs(ge.weights.sum() - 2 * kPi) <= 1e-12 * 2 * kPi);
  auto gc = build_grid(disk(cplx(0, 1), 0.5), 8, 16);
  CHECK(std::abs(gc.weights.sum() - 0.25 * kPi) <= 1e-12);
}

TEST_CASE("conjugate-closed grid is exactly mirror symmetric") {
  DomainSpec d = disk(cplx(0, 1), 0.5);
  d.conjugate_closed = true;
  auto g = build_grid(d, 10, 20);
  REQUIRE(g.size() == 2 * 10 * 20);
  for (int k = 0; k < g.size(); ++k) {
    const int m = g.conj_index(k);
    CHECK(g.nodes[m] == std::conj(g.nodes[k]));  // bitwise by construction
    CHECK(g.weights[m] == g.weights[k]);
    CHECK(g.conj_index(m) == k);
  }
}

TEST_CASE("quadrature reproduces closed-form moments") {
  // disk and a rotated, shifted ellipse; monomials z^p conj(z)^q up to degree 4
  for (const DomainSpec& d : {disk(cplx(0.3, -0.2), 1.3), ellipse(cplx(1.0, 2.0), 1.5, 0.7, 0.6)}) {
    auto g = build_grid(d, 16, 32);
    const ComponentSpec cs = d.components()[0];
    for (int p = 0; p <= 4; ++p)
      for (int q = 0; q + p <= 4; ++q) {
        cplx quad = 0.0;
        for (int k = 0; k < g.size(); ++k)
          quad += g.weights[k] * std::pow(g.nodes[k], p) * std::pow(std::conj(g.nodes[k]), q);
        const cplx ref = component_moment(cs, p, q);
        const double scale = std::max(1.0, std::abs(ref));
        CHECK(std::abs(quad - ref) <= 1e-10 * scale);
      }
  }
}

TEST_CASE("conjugate closure: mirrored sums agree termwise") {
  DomainSpec d = ellipse(cplx(0.2, 1.5), 0.6, 0.3, 0.4);
  d.conjugate_closed = true;
  auto g = build_grid(d, 8, 16);
  auto h = [](cplx z) { return std::exp(z) * z * z + cplx(0.3, 0.1) * std::conj(z); };
  cplx s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    s1 += g.weights[k] * h(g.nodes[k]);
    s2 += g.weights[k] * std::conj(h(std::conj(g.nodes[k])));
  }
  CHECK(std::abs(s1 - std::conj(s2)) <= 1e-14 * std::abs(s1));
}

TEST_CASE("contour rules: residues and closed loops") {
  auto c = circle_contour(0.0, 1.0, 64);
  cplx r1 = 0.0, r2 = 0.0, r0 = 0.0;
  for (int k = 0; k < 64; ++k) {
    r1 += c.dz[k] / c.nodes[k];
    r2 += c.dz[k] * c.nodes[k];
    r0 += c.dz[k];
  }
  CHECK(std::abs(r1 - cplx(0, 2 * kPi)) <= 1e-12);
  CHECK(std::abs(r2) <= 1e-12);
  CHECK(std::abs(r0) <= 1e-12);
}

TEST_CASE("schwarz function of the ellipse") {
  const double a = 2.0, b = 1.0;
  CHECK(std::abs(schwarz_ellipse(a, b, cplx(2.0, 0.0)) - cplx(2.0, 0.0)) <= 1e-12);
  // boundary point at angle pi/3
  const cplx z(a * std::cos(kPi / 3), b * std::sin(kPi / 3));
  CHECK(std::abs(schwarz_ellipse(a, b, z) - std::conj(z)) <= 1e-12);
  // branch: s(z)/z -> 1, via S => s = ((a^2+b^2) z - c^2 S)/(2ab)
  const double c2 = a * a - b * b;
  for (double R : {10.0, 100.0}) {
    const cplx zz(R, 0.3 * R);
    const cplx S = schwarz_ellipse(a, b, zz);
    const cplx s = ((a * a + b * b) * zz - c2 * S) / (2.0 * a * b);
    CHECK(std::abs(s / zz - 1.0) <= 0.6 * c2 / std::norm(zz));
  }
  CHECK_THROWS_AS(schwarz_ellipse(a, b, cplx(0.5, 0.0)), Error);   // focal segment
  CHECK_THROWS_AS(schwarz_ellipse(1.0, 1.0, cplx(2.0, 0.0)), Error);  // circle
}

TEST_CASE("contour/area consistency via the Schwarz function") {
  // (1/2 pi i) oint h S dz = (1/pi) iint h dA for analytic h of degree <= 4
  const DomainSpec d = ellipse(0.0, 2.0, 1.0);
  auto cont = boundary_contour(d, 128);
  auto g = build_grid(d, 16, 32);
  for (int p = 0; p <= 4; ++p) {
    cplx lhs = 0.0;
    for (int k = 0; k < cont.nodes.size(); ++k)
      lhs += std::pow(cont.nodes[k], p) * schwarz_ellipse(2.0, 1.0, cont.nodes[k]) * cont.dz[k];
    lhs /= cplx(0, 2 * kPi);
    cplx rhs = 0.0;
    for (int k = 0; k < g.size(); ++k) rhs += g.weights[k] * std::pow(g.nodes[k], p);
    rhs /= kPi;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
  // special case h = 1: area/pi = 2
  cplx area = 0.0;
  for (int k = 0; k < cont.nodes.size(); ++k)
    area += schwarz_ellipse(2.0, 1.0, cont.nodes[k]) * cont.dz[k];
  CHECK(std::abs(area / cplx(0, 2 * kPi) - 2.0) <= 1e-10);
}

TEST_CASE("mother body reproduces area integrals of analytic functions") {
  auto mb = mother_body(2.0, 1.0, 48);
  auto g = build_grid(ellipse(0.0, 2.0, 1.0), 16, 32);
  for (int p = 0; p <= 2; ++p) {
    cplx lhs = 0.0;
    for (int k = 0; k < mb.nodes.size(); ++k) lhs += std::pow(mb.nodes[k], p) * mb.dz[k];
    lhs /= cplx(0, 2 * kPi);
    cplx rhs = 0.0;
    for (int k = 0; k < g.size(); ++k) rhs += g.weights[k] * std::pow(g.nodes[k], p);
    rhs /= kPi;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
  CHECK_THROWS_AS(mother_body(1.0, 1.0, 16), Error);
  // jump data consistent with the absorbed weights at interior nodes
  for (int k = 10; k < 12; ++k) CHECK(std::abs(mb.jump[k].real()) <= 1e-14);
}

TEST_CASE("domain validation") {
  DomainSpec bad = disk(0.0, 1.0);
  bad.a = bad.b = -1.0;
  CHECK_THROWS_AS(build_grid(bad, 8, 16), Error);
  DomainSpec touch = disk(cplx(0, 0.5), 0.5);  // touches the real axis
  touch.conjugate_closed = true;
  CHECK_THROWS_AS(build_grid(touch, 8, 16), Error);
  CHECK_THROWS_AS(build_grid(disk(0.0, 1.0), 1, 16), Error);
  CHECK_THROWS_AS(build_grid(disk(0.0, 1.0), 8, 2), Error);
  DomainSpec uni = disk(0.0, 1.0);
  uni.kind = DomainKind::union_of_two;
  uni.center2 = cplx(1.5, 0.0);  // overlapping bounding circles
  uni.a2 = uni.b2 = 1.0;
  CHECK_THROWS_AS(build_grid(uni, 8, 16), Error);
  uni.center2 = cplx(4.0, 0.0);
  auto g = build_grid(uni, 8, 16);
  CHECK(std::abs(g.weights.sum() - 2 * kPi) <= 1e-12 * 2 * kPi);
}

TEST_CASE("grid CSV export") {
  auto g = build_grid(disk(0.0, 1.0), 2, 4);
  std::ostringstream os;
  g.export_csv(os);
  CHECK(os.str().substr(0, 13) == "re,im,weight\n");
}
