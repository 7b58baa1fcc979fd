#include "nls.hpp"

#include <cmath>

#include "determinants.hpp"
#include "linalg.hpp"

namespace dbar::nls {

namespace {
geom::DomainSpec closed_domain(const geom::DomainSpec& base) {
  if (base.kind == geom::DomainKind::union_of_two)
    throw Error(ErrorCode::invalid_argument, "nls: domain must be a single disk or ellipse");
  geom::DomainSpec d = base;
  d.conjugate_closed = true;
  d.validate();
  return d;
}

cplx beta_star(const field::ScalarProfile& beta, cplx z) { return std::conj(beta(std::conj(z))); }
}  // namespace

field::MatrixField build_nls_M(const NLSScenario& s) {
  const geom::DomainSpec dom = closed_domain(s.domain);
  geom::DomainSpec base = s.domain;
  base.conjugate_closed = false;
  field::MatrixField M;
  M.support = dom;
  M.traceless = true;
  M.nilpotent = true;
  M.schwarz_symmetric = (s.symmetry_factor == 1.0);
  const NLSScenario sc = s;
  const double guard = 50.0;
  M.eval = [sc, base, guard](cplx z) {
    MatrixXcd v = MatrixXcd::Zero(2, 2);
    const cplx xi = sc.xi(z);
    if (std::abs(xi.imag()) > guard)
      throw Error(ErrorCode::invalid_argument, "build_nls_M: |Im xi| overflow on the domain");
    if (base.contains(z)) {
      v(0, 1) = sc.beta(z) * std::exp(cplx(0, -2) * xi);
    } else {
      geom::DomainSpec mirror = base;
      mirror.center = std::conj(base.center);
      mirror.rotation = -base.rotation;
      if (mirror.contains(z))
        v(1, 0) = -sc.symmetry_factor * beta_star(sc.beta, z) * std::exp(cplx(0, 2) * xi);
    }
    return v;
  };
  return M;
}

kernel::KernelPair nls_pair(const NLSScenario& s) {
  const geom::DomainSpec dom = closed_domain(s.domain);
  geom::DomainSpec base = s.domain;
  base.conjugate_closed = false;
  geom::DomainSpec mirror = base;
  mirror.center = std::conj(base.center);
  mirror.rotation = -base.rotation;

  kernel::KernelPair p;
  p.support = dom;
  const NLSScenario sc = s;
  const double rp = 1.0 / std::sqrt(kPi);
  auto sqrt_beta = [sc](cplx z) { return std::sqrt(sc.beta(z)); };
  auto sqrt_beta_star = [sc](cplx z) { return std::sqrt(beta_star(sc.beta, z)); };
  // f = (1/sqrt(pi)) e^{-i xi s3} [sqrt(b) chi_D; -sqrt(b*) chi_Dbar]
  p.f = [sc, base, mirror, rp, sqrt_beta, sqrt_beta_star](cplx z) {
    MatrixXcd F = MatrixXcd::Zero(2, 1);
    const cplx e = std::exp(cplx(0, -1) * sc.xi(z));
    if (base.contains(z)) F(0, 0) = rp * sqrt_beta(z) * e;
    if (mirror.contains(z)) F(1, 0) = -rp * sqrt_beta_star(z) / e;
    return F;
  };
  p.g = [sc, base, mirror, rp, sqrt_beta, sqrt_beta_star](cplx z) {
    MatrixXcd G = MatrixXcd::Zero(2, 1);
    const cplx e = std::exp(cplx(0, 1) * sc.xi(z));
    if (mirror.contains(z)) G(0, 0) = rp * sqrt_beta_star(z) * e;
    if (base.contains(z)) G(1, 0) = rp * sqrt_beta(z) / e;
    return G;
  };
  // dz f: supports are disjoint; chain rule on each entry. sqrt(beta) derivative from the
  // profile (analytic profiles: b'(z)/(2 sqrt(b)); gaussian handled as smooth extension).
  p.dzf = [sc, base, mirror, rp, sqrt_beta, sqrt_beta_star](cplx z) {
    MatrixXcd F = MatrixXcd::Zero(2, 1);
    const cplx dxi = cplx(0, -1) * sc.dz_xi(z);
    const cplx e = std::exp(cplx(0, -1) * sc.xi(z));
    if (base.contains(z)) {
      const cplx b = sc.beta(z);
      const cplx db = sc.beta.dz(z);
      const cplx sb = std::sqrt(b);
      const cplx dsb = (b == 0.0) ? 0.0 : db / (2.0 * sb);
      F(0, 0) = rp * e * (dsb + sb * dxi);
    }
    if (mirror.contains(z)) {
      // beta*(z) = conj(beta(conj z)): holomorphic derivative = conj(beta.dz(conj z))
      const cplx bs = beta_star(sc.beta, z);
      const cplx dbs = std::conj(sc.beta.dz(std::conj(z)));
      const cplx sbs = std::sqrt(bs);
      const cplx dsbs = (bs == 0.0) ? 0.0 : dbs / (2.0 * sbs);
      F(1, 0) = -rp * (dsbs - sbs * dxi) / e;
    }
    return F;
  };
  return p;
}

PsiResult psi_extract(const core::Solution& sol) {
  const Mat2 G1 = sol.moment1();
  return {cplx(0, 2) * G1(0, 1), G1(0, 0), G1};
}

double schwarz_residual(const core::Solution& sol) {
  const auto& grid = sol.workspace().grid();
  if (!grid.domain.conjugate_closed)
    throw Error(ErrorCode::invalid_argument, "schwarz_residual: grid not conjugate-closed");
  Mat2 s2;
  s2 << 0.0, cplx(0, -1), cplx(0, 1), 0.0;
  double worst = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const int km = grid.conj_index(k);
    const Mat2 pred = s2 * sol.value(km).conjugate() * s2;
    worst = std::max(worst, (sol.value(k) - pred).norm());
  }
  return worst;
}

Mat2 LaxPair::U(cplx z) const {
  Mat2 u;
  u << cplx(0, -1) * z, psi, -std::conj(psi), cplx(0, 1) * z;
  return u;
}

Mat2 LaxPair::V(cplx z) const {
  const double a2 = std::norm(psi);
  Mat2 v;
  v << cplx(0, -1) * z * z + cplx(0, 0.5) * a2, z * psi + cplx(0, 0.5) * dx_psi,
      -z * std::conj(psi) + cplx(0, 0.5) * std::conj(dx_psi),
      cplx(0, 1) * z * z - cplx(0, 0.5) * a2;
  return v;
}

NLSWorkspace::NLSWorkspace(const NLSScenario& base, int radial_points, int angular_points)
    : base_(base) {
  ws_ = std::make_unique<core::Workspace>(
      geom::build_grid(closed_domain(base.domain), radial_points, angular_points));
}

core::Solution NLSWorkspace::solve_at(double x, double t, double t3) const {
  NLSScenario s = base_;
  s.x = x;
  s.t = t;
  s.t3 = t3;
  return core::solve(*ws_, build_nls_M(s));
}

cplx NLSWorkspace::psi(double x, double t, double t3) const {
  return psi_extract(solve_at(x, t, t3)).psi;
}

LaxPair lax_matrices(const NLSWorkspace& w, double x, double t, double h_x) {
  LaxPair lp;
  lp.psi = w.psi(x, t);
  lp.dx_psi = (w.psi(x + h_x, t) - w.psi(x - h_x, t)) / (2.0 * h_x);
  return lp;
}

double zero_curvature_residual(const NLSWorkspace& w, double x, double t, double h,
                               const std::vector<cplx>& probes) {
  const LaxPair l0 = lax_matrices(w, x, t, h);
  const LaxPair ltp = lax_matrices(w, x, t + h, h);
  const LaxPair ltm = lax_matrices(w, x, t - h, h);
  const LaxPair lxp = lax_matrices(w, x + h, t, h);
  const LaxPair lxm = lax_matrices(w, x - h, t, h);
  double worst = 0.0;
  for (cplx z : probes) {
    const Mat2 Ut = (ltp.U(z) - ltm.U(z)) / (2.0 * h);
    const Mat2 Vx = (lxp.V(z) - lxm.V(z)) / (2.0 * h);
    const Mat2 U0 = l0.U(z), V0 = l0.V(z);
    worst = std::max(worst, (Ut - Vx + U0 * V0 - V0 * U0).norm());
  }
  return worst;
}

double nls_residual(const NLSWorkspace& w, double x, double t, double h) {
  const cplx p0 = w.psi(x, t);
  const cplx pt = (w.psi(x, t + h) - w.psi(x, t - h)) / (2.0 * h);
  const cplx pxx = (w.psi(x + h, t) - 2.0 * p0 + w.psi(x - h, t)) / (h * h);
  return std::abs(cplx(0, 1) * pt + 0.5 * pxx + std::norm(p0) * p0);
}

double cmkdv_residual(const NLSWorkspace& w, double x, double t, double h) {
  const cplx p0 = w.psi(x, t);
  const cplx pp = w.psi(x + h, t), pm = w.psi(x - h, t);
  const cplx pp2 = w.psi(x + 2 * h, t), pm2 = w.psi(x - 2 * h, t);
  const cplx pt3 = (w.psi(x, t, h) - w.psi(x, t, -h)) / (2.0 * h);
  const cplx pxxx = (pp2 - 2.0 * pp + 2.0 * pm - pm2) / (2.0 * h * h * h);
  const cplx px = (pp - pm) / (2.0 * h);
  return std::abs(pt3 + 0.25 * pxxx + 1.5 * std::norm(p0) * px);
}

double det2_psi_check(const NLSWorkspace& w, double x, double t, double h_x) {
  auto logdet2_at = [&](double xx) {
    NLSScenario s = w.base();
    s.x = xx;
    s.t = t;
    const kernel::KernelPair p = nls_pair(s);
    return det::logdet2_lu(kernel::discretize(p, w.core().grid()).A);
  };
  const cplx d2 =
      (logdet2_at(x + h_x) - 2.0 * logdet2_at(x) + logdet2_at(x - h_x)) / (h_x * h_x);
  const cplx psi = w.psi(x, t);
  return std::abs(d2 - std::norm(psi));
}

RHReduction::RHReduction(const NLSScenario& s, int n) {
  if (!(s.domain.a > s.domain.b))
    throw Error(ErrorCode::invalid_argument, "rh_reduce: domain must be a genuine ellipse");
  if (!s.beta.analytic())
    throw Error(ErrorCode::invalid_argument, "rh_reduce: beta must be analytic on the domain");
  geom::ComponentSpec base{s.domain.center, s.domain.a, s.domain.b, s.domain.rotation, false};
  geom::ComponentSpec mirror = base;
  mirror.center = std::conj(base.center);
  mirror.mirror = true;

  const geom::ContourGrid L = geom::mother_body(base, n);
  const geom::ContourGrid Lb = geom::mother_body(mirror, n);
  zL_ = L.nodes;
  zLb_ = Lb.nodes;
  bL_.resize(n);
  bLb_.resize(n);
  const cplx itwopi = 1.0 / cplx(0.0, 2.0 * kPi);
  for (int k = 0; k < n; ++k) {
    const cplx xiL = s.xi(zL_[k]);
    const cplx xiLb = s.xi(zLb_[k]);
    bL_[k] = s.beta(zL_[k]) * std::exp(cplx(0, -2) * xiL) * L.dz[k] * itwopi;
    bLb_[k] = beta_star(s.beta, zLb_[k]) * std::exp(cplx(0, 2) * xiLb) * Lb.dz[k] * itwopi;
  }
  // Unknowns [A1; A2; B1; B2]:
  //   A(z_j in L)  = e1 + sum_k bLb_k B(z_k)/(z_k - z_j)
  //   B(z_j in Lb) = e2 - sum_k bL_k  A(z_k)/(z_k - z_j)
  MatrixXcd S = MatrixXcd::Zero(4 * n, 4 * n);
  MatrixXcd rhs = MatrixXcd::Zero(4 * n, 1);
  for (int j = 0; j < n; ++j) {
    S(j, j) = 1.0;
    S(n + j, n + j) = 1.0;
    S(2 * n + j, 2 * n + j) = 1.0;
    S(3 * n + j, 3 * n + j) = 1.0;
    for (int k = 0; k < n; ++k) {
      const cplx kb = bLb_[k] / (zLb_[k] - zL_[j]);
      const cplx kl = bL_[k] / (zL_[k] - zLb_[j]);
      S(j, 2 * n + k) -= kb;          // A1 <- B1
      S(n + j, 3 * n + k) -= kb;      // A2 <- B2
      S(2 * n + j, k) += kl;          // B1 <- A1
      S(3 * n + j, n + k) += kl;      // B2 <- A2
    }
    rhs(j, 0) = 1.0;
    rhs(3 * n + j, 0) = 1.0;
  }
  const double rcond = lin::solve_inplace(S, rhs);
  if (rcond < 1e-14)
    throw Error(ErrorCode::solver_failure, "rh_reduce: ill-conditioned contour system");
  sol_ = rhs;
}

Mat2 RHReduction::evaluate(cplx z) const {
  const int n = static_cast<int>(zL_.size());
  Mat2 G = Mat2::Identity();
  cplx a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx kb = bLb_[k] / (zLb_[k] - z);
    const cplx kl = bL_[k] / (zL_[k] - z);
    b1 += kb * sol_(2 * n + k, 0);
    b2 += kb * sol_(3 * n + k, 0);
    a1 += kl * sol_(k, 0);
    a2 += kl * sol_(n + k, 0);
  }
  G(0, 0) = 1.0 + b1;
  G(1, 0) = b2;
  G(0, 1) = -a1;
  G(1, 1) = 1.0 - a2;
  return G;
}

cplx RHReduction::psi() const {
  const int n = static_cast<int>(zL_.size());
  cplx m12 = 0.0;
  for (int k = 0; k < n; ++k) m12 += bL_[k] * sol_(k, 0);
  return cplx(0, 2) * m12;
}

}  // namespace dbar::nls
