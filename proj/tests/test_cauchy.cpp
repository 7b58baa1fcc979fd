#include <cmath>

#include "cauchy.hpp"
#include "doctest.h"
#include "geometry.hpp"

using namespace dbar;
using namespace dbar::geom;
using namespace dbar::cauchy;

namespace {
DomainSpec disk(cplx c, double r) {
  DomainSpec d;
  d.center = c;
  d.a = d.b = r;
  return d;
}

VectorXcd sample(const QuadratureGrid& g, const std::function<cplx(cplx)>& f) {
  VectorXcd v(g.size());
  for (int k = 0; k < g.size(); ++k) v[k] = f(g.nodes[k]);
  return v;
}
}  // namespace

TEST_CASE("disk Cauchy matrix: closed forms at nodes") {
  const cplx c0(0.4, -0.7);
  const double R = 1.3;
  auto g = build_grid(disk(c0, R), 16, 32);
  CauchyOp op(g);
  const MatrixXcd& Q = op.weak();
  const VectorXcd one = VectorXcd::Ones(g.size());
  const VectorXcd w = g.nodes;
  // C[1](z) = -conj(z - c0) inside
  VectorXcd got = Q * one;
  for (int k = 0; k < g.size(); ++k)
    CHECK(std::abs(got[k] + std::conj(w[k] - c0)) <= 2e-14);
  // C[conj(w-c0)] = -conj(z-c0)^2/2
  got = Q * sample(g, [&](cplx z) { return std::conj(z - c0); });
  for (int k = 0; k < g.size(); ++k)
    CHECK(std::abs(got[k] + 0.5 * std::conj((w[k] - c0) * (w[k] - c0))) <= 2e-14);
  // C[(w-c0)] = R^2 - |z-c0|^2
  got = Q * sample(g, [&](cplx z) { return z - c0; });
  for (int k = 0; k < g.size(); ++k)
    CHECK(std::abs(got[k] - (R * R - std::norm(w[k] - c0))) <= 2e-14);
}

TEST_CASE("disk Cauchy rows: interior, exterior, node targets") {
  const double R = 1.0;
  auto g = build_grid(disk(0.0, R), 16, 32);
  CauchyOp op(g);
  const VectorXcd one = VectorXcd::Ones(g.size());
  for (cplx z : {cplx(0.3, 0.1), cplx(-0.2, 0.55), cplx(0.0, 0.0)}) {
    const cplx v = op.weak_row(z) * one;
    CHECK(std::abs(v + std::conj(z)) <= 2e-14);
  }
  for (cplx z : {cplx(1.5, 0.5), cplx(-2.0, 0.1), cplx(0.0, 1.0001)}) {
    const cplx v = op.weak_row(z) * one;
    CHECK(std::abs(v + 1.0 / z) <= 2e-13);
  }
  // row at a node reproduces the matrix row
  const RowVectorXcd row = op.weak_row(g.nodes[37]);
  CHECK((row - op.weak().row(37)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("disk strong (z-derivative) matrix and rows") {
  auto g = build_grid(disk(0.0, 1.0), 16, 32);
  CauchyOp op(g);
  const MatrixXcd& D = op.strong();
  const VectorXcd one = VectorXcd::Ones(g.size());
  CHECK((D * one).cwiseAbs().maxCoeff() <= 1e-12);  // d/dz of -conj(z)
  VectorXcd got = D * g.nodes;                      // d/dz (1 - z conj z) = -conj z
  for (int k = 0; k < g.size(); ++k) CHECK(std::abs(got[k] + std::conj(g.nodes[k])) <= 1e-12);
  got = D * sample(g, [](cplx z) { return std::conj(z); });
  CHECK(got.cwiseAbs().maxCoeff() <= 1e-12);
  // exterior row: d/dz of -R^2/z = R^2/z^2
  const cplx z(1.7, -0.4);
  const cplx v = op.strong_row(z) * one;
  CHECK(std::abs(v - 1.0 / (z * z)) <= 1e-12);
  // smooth density: strong row at a node agrees with a centered FD of weak rows
  auto phi = sample(g, [](cplx z) { return std::exp(z) * std::conj(z) * std::conj(z); });
  const int j = 101;
  const cplx zj = g.nodes[j];
  const double h = 1e-5;
  const cplx fpx = (op.weak_row(zj + h) * phi - op.weak_row(zj - h) * phi)(0) / (2 * h);
  const cplx fpy =
      (op.weak_row(zj + cplx(0, h)) * phi - op.weak_row(zj - cplx(0, h)) * phi)(0) / (2 * h);
  const cplx dz_fd = 0.5 * (fpx - cplx(0, 1) * fpy);
  CHECK(std::abs((op.strong().row(j) * phi)(0) - dz_fd) <= 1e-9);
}

TEST_CASE("smooth density self-convergence across resolutions") {
  auto f = [](cplx z) { return std::exp(z) * std::conj(z) + std::sin(z.real()); };
  auto g1 = build_grid(disk(0.0, 1.0), 14, 28);
  auto g2 = build_grid(disk(0.0, 1.0), 22, 44);
  CauchyOp op1(g1), op2(g2);
  for (cplx z : {cplx(0.3, 0.1), cplx(0.9, 0.0), cplx(0.05, -0.6)}) {
    const cplx v1 = op1.weak_row(z) * sample(g1, f);
    const cplx v2 = op2.weak_row(z) * sample(g2, f);
    CHECK(std::abs(v1 - v2) <= 1e-12);
  }
}

TEST_CASE("ellipse self block: exact for constant densities") {
  DomainSpec d;
  d.kind = DomainKind::ellipse;
  d.center = cplx(0.5, 2.0);
  d.a = 0.8;
  d.b = 0.35;
  d.rotation = 0.5;
  auto g = build_grid(d, 12, 24);
  CauchyOp op(g);
  const VectorXcd got = op.weak() * VectorXcd::Ones(g.size());
  const double q = (d.a - d.b) / (d.a + d.b);
  const cplx rot = std::polar(1.0, d.rotation);
  for (int k = 0; k < g.size(); ++k) {
    const cplx zt = std::conj(rot) * (g.nodes[k] - d.center);
    const cplx ref = (1.0 / rot) * (-(std::conj(zt) - q * zt));
    CHECK(std::abs(got[k] - ref) <= 1e-12);
  }
}

TEST_CASE("cross-component blocks are plain smooth quadrature") {
  DomainSpec d = disk(cplx(0, 1), 0.5);
  d.conjugate_closed = true;
  auto g = build_grid(d, 10, 20);
  CauchyOp op(g);
  const int n0 = g.comps[1].offset;
  // C over the mirror disk of the constant 1, evaluated in the upper disk:
  // exterior closed form -r^2/(z - conj(center)).
  VectorXcd phi = VectorXcd::Zero(g.size());
  phi.segment(n0, g.size() - n0).setOnes();
  const VectorXcd got = op.weak() * phi;
  for (int k = 0; k < n0; ++k) {
    const cplx ref = -0.25 / (g.nodes[k] - cplx(0, -1));
    CHECK(std::abs(got[k] - ref) <= 1e-11);
  }
}
