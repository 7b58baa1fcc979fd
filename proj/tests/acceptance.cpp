// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
//
// Residual-decrease clauses accept, alternatively to a strict decrease, values below
// a documented floor (kResidualFloor / kHirotaFloor) that sits orders of magnitude
// below the stated tolerance: several discrete identities here are preserved exactly
// by the discretization, so both sides of the comparison bottom out at machine level.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "deformation.hpp"
#include "determinants.hpp"
#include "linalg.hpp"
#include "nls.hpp"

using namespace dbar;

namespace {

constexpr double kResidualFloor = 1e-10;
constexpr double kHirotaFloor = 1e-12;

int g_failures = 0;

void line(int idx, const char* label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", idx, label,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

geom::DomainSpec disk(cplx c, double r) {
  geom::DomainSpec d;
  d.center = c;
  d.a = d.b = r;
  return d;
}

field::ScalarProfile poly_profile(std::vector<cplx> coeffs) {
  field::ScalarProfile p;
  p.kind = field::ProfileKind::polynomial;
  p.coeffs = std::move(coeffs);
  return p;
}

nls::NLSScenario nls_scenario() {
  nls::NLSScenario s;
  s.domain = disk(cplx(0, 1), 0.5);
  s.beta.kind = field::ProfileKind::constant;
  s.beta.value = 1.0;
  s.x = 0.3;
  s.t = 0.1;
  return s;
}

kernel::KernelPair kp_pair(const geom::DomainSpec& dom, double c) {
  return kernel::poly_pair(dom, c, poly_profile({1.0}), poly_profile({0.0, 1.0}));
}

// ---------------------------------------------------------------------------

void criterion_1_unimodularity() {
  const nls::NLSScenario s = nls_scenario();
  double r20, r28;
  {
    nls::NLSWorkspace w(s, 20, 40);
    r20 = core::unimodularity_residual(w.solve_at(s.x, s.t));
  }
  {
    nls::NLSWorkspace w(s, 28, 56);
    r28 = core::unimodularity_residual(w.solve_at(s.x, s.t));
  }
  const bool pass = r20 <= 1e-6 && (r28 <= r20 || r28 <= kResidualFloor);
  line(1, "unimodularity", pass, fmt("max|det G - 1| = %.3e (20x40), %.3e (28x56); tol 1e-6",
                                     r20, r28));
}

void criterion_2_resolvent() {
  const nls::NLSScenario s = nls_scenario();
  const kernel::KernelPair p = nls::nls_pair(s);
  geom::DomainSpec dom = s.domain;
  dom.conjugate_closed = true;
  double r20, r24;
  {
    core::Workspace ws(geom::build_grid(dom, 20, 40));
    const auto sol = core::solve(ws, kernel::m_from_pair(p));
    r20 = kernel::resolvent_identity_residual(p, sol, ws.grid());
  }
  {
    core::Workspace ws(geom::build_grid(dom, 24, 48));
    const auto sol = core::solve(ws, kernel::m_from_pair(p));
    r24 = kernel::resolvent_identity_residual(p, sol, ws.grid());
  }
  // epsilon-scaled Neumann order on a 12x24 grid
  core::Workspace ws(geom::build_grid(dom, 12, 24));
  std::vector<double> norms;
  for (double eps : {1e-2, 1e-3}) {
    kernel::KernelPair pe = p;
    auto f = p.f, df = p.dzf;
    pe.f = [f, eps](cplx z) -> MatrixXcd { return eps * f(z); };
    pe.dzf = [df, eps](cplx z) -> MatrixXcd { return eps * df(z); };
    const auto sol = core::solve(ws, kernel::m_from_pair(pe));
    const auto A = kernel::discretize(pe, ws.grid());
    const auto R = kernel::discretize_resolvent(pe, sol);
    norms.push_back(lin::norm2_estimate(R.A - A.A - A.A * A.A));
  }
  const double order = std::log10(norms[0] / norms[1]);
  const bool pass =
      r20 <= 1e-6 && (r24 <= r20 || r24 <= kResidualFloor) && order >= 2.7;
  line(2, "resolvent identity", pass,
       fmt("|RK - R + K| = %.3e (20x40), %.3e (24x48); Neumann order %.2f (>= 2.7)", r20, r24,
           order));
}

void criterion_3_determinant_paths() {
  double worst = 0.0;
  auto agree = [&worst](const MatrixXcd& A, int n_max = 40) {
    const cplx de = det::det2_eigen(A);
    const cplx df = det::fredholm_det(A) * std::exp(A.trace());
    worst = std::max(worst, std::abs(de - df) / std::abs(de));
    const auto sr = det::det2_series(det::trace_powers(A, n_max));
    if (sr.converged) worst = std::max(worst, std::abs(sr.value - de) / std::abs(de));
    return sr.converged;
  };
  bool all_converged = true;
  all_converged &= agree(MatrixXcd::Zero(6, 6), 5);
  VectorXcd u(4), v(4);
  u << cplx(0.3, 0.1), cplx(-0.2, 0), cplx(0.1, 0.4), cplx(0, -0.3);
  v << cplx(0.5, 0), cplx(0.1, -0.2), cplx(-0.4, 0.1), cplx(0.2, 0.2);
  all_converged &= agree(u * v.transpose());
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  MatrixXcd R(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) R(i, j) = cplx(dist(rng), dist(rng)) / 3.0;
  all_converged &= agree(R);
  // discretized operators: dressed KP pair and the NLS pair
  {
    auto g = geom::build_grid(disk(cplx(0.2, 0), 1.0), 16, 32);
    const auto p = deform::dress_pair(kp_pair(disk(cplx(0.2, 0), 1.0), 0.25),
                                      {0.1, 0.05, 0.02});
    all_converged &= agree(kernel::discretize(p, g).A, 60);
  }
  {
    geom::DomainSpec dom = disk(cplx(0, 1), 0.5);
    dom.conjugate_closed = true;
    auto g = geom::build_grid(dom, 10, 20);
    all_converged &= agree(kernel::discretize(nls::nls_pair(nls_scenario()), g).A, 60);
  }
  const bool pass = worst <= 1e-10 && all_converged;
  line(3, "determinant paths", pass,
       fmt("series/eigen/fredholm*exp(tr) worst relative gap %.3e (tol 1e-10)", worst));
}

void criterion_4_variational() {
  const auto dom = disk(cplx(0.2, 0), 1.0);
  core::Workspace ws(geom::build_grid(dom, 16, 32));
  const auto pr = kp_pair(dom, 0.25);
  field::MatrixField M0 = kernel::m_from_pair(pr);
  const deform::TimeVector t{0.1, 0.05, 0.02};
  deform::DeformationState st(ws, M0, t);
  const VectorXcd om = deform::malgrange_components(st, 2);
  auto logdet = [&](const deform::TimeVector& tt) {
    return det::logdet2_lu(kernel::discretize(deform::dress_pair(pr, tt), ws.grid()).A);
  };
  const double h = 1e-4;
  double worst = 0.0;
  for (int j : {1, 2}) {
    deform::TimeVector tp = t, tm = t;
    tp[j - 1] += h;
    tm[j - 1] -= h;
    const cplx fd = (logdet(tp) - logdet(tm)) / (2 * h);
    worst = std::max(worst, std::abs(om[j - 1] - fd));
  }
  line(4, "variational formula", worst <= 1e-4,
       fmt("max_j |omega_j - FD_j log det2| = %.3e (tol 1e-4)", worst));
}

void criterion_5_closedness() {
  const auto dom = disk(cplx(0.2, 0), 1.0);
  core::Workspace ws(geom::build_grid(dom, 16, 32));
  field::MatrixField M0 = kernel::m_from_pair(kp_pair(dom, 0.25));
  const deform::TimeVector t0{0.1, 0.05, 0.02};
  const double h = 1e-4;
  auto omega_at = [&](int j, const deform::TimeVector& tt) {
    deform::DeformationState st(ws, M0, tt);
    return deform::malgrange_component(st, j);
  };
  double worst = 0.0;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}}) {
    deform::TimeVector tp = t0, tm = t0;
    tp[i - 1] += h;
    tm[i - 1] -= h;
    const cplx a = (omega_at(j, tp) - omega_at(j, tm)) / (2 * h);
    tp = t0;
    tm = t0;
    tp[j - 1] += h;
    tm[j - 1] -= h;
    const cplx b = (omega_at(i, tp) - omega_at(i, tm)) / (2 * h);
    worst = std::max(worst, std::abs(a - b));
  }
  deform::DeformationState st(ws, M0, {0.0, 0.0, 0.0});
  const cplx loop = deform::tau_along_path(st, {{0.0, 0.0, 0.0},
                                                {0.12, 0.0, 0.0},
                                                {0.12, 0.08, 0.0},
                                                {0.0, 0.08, 0.0},
                                                {0.0, 0.0, 0.0}});
  const bool pass = worst <= 1e-5 && std::abs(loop) <= 1e-5;
  line(5, "closedness of omega", pass,
       fmt("max mixed-partial gap %.3e, rectangle loop %.3e (tol 1e-5)", worst,
           std::abs(loop)));
}

void criterion_6_miwa() {
  const auto dom = disk(cplx(0.2, 0), 1.0);
  core::Workspace ws(geom::build_grid(dom, 16, 32));
  const auto pr = kp_pair(dom, 0.25);
  field::MatrixField M0 = kernel::m_from_pair(pr);
  const deform::TimeVector t{0.1, 0.05, 0.02};
  const cplx zeta(3.0, 0.0);
  deform::DeformationState st(ws, M0, t);
  const double cm = deform::connection_check(st, zeta, -1);
  const double cp = deform::connection_check(st, zeta, +1);
  const auto rm = deform::tau_ratio_check(ws, pr, t, zeta, -1);
  const auto rp = deform::tau_ratio_check(ws, pr, t, zeta, +1);
  const Mat2 Gz = st.solution().evaluate(zeta);
  const auto solp =
      core::solve(ws, deform::miwa_shift_M(deform::dress(M0, t), zeta, +1));
  const double comp = std::abs(solp.evaluate(zeta)(0, 0) * Gz(1, 1) - 1.0);
  const bool pass = std::max(cm, cp) <= 1e-6 && std::max(rm.rel_error, rp.rel_error) <= 1e-4 &&
                    comp <= 1e-6;
  line(6, "miwa machinery", pass,
       fmt("connection %.3e/%.3e (1e-6), tau-ratio %.3e/%.3e (1e-4), compose %.3e (1e-6)", cm,
           cp, rm.rel_error, rp.rel_error, comp));
}

void criterion_7_hirota() {
  const auto dom = disk(cplx(0.2, 0), 1.0);
  core::Workspace ws(geom::build_grid(dom, 16, 32));
  field::MatrixField M0 = kernel::m_from_pair(kp_pair(dom, 0.25));
  const deform::TimeVector t{0.1}, s{0.05, 0.02};
  const double v8 = std::abs(deform::hirota_residue(ws, M0, t, s, 8.0));
  const double v16 = std::abs(deform::hirota_residue(ws, M0, t, s, 16.0));
  const bool pass = v8 <= 1e-6 && (v16 <= v8 / 3.0 || v16 <= kHirotaFloor);
  line(7, "hirota residue", pass,
       fmt("|res| = %.3e (R=8), %.3e (R=16); tol 1e-6, decrease >= 3x or below %.0e floor", v8,
           v16, kHirotaFloor));
}

void criterion_8_kp() {
  const auto dom = disk(cplx(0.2, 0), 1.0);
  core::Workspace ws(geom::build_grid(dom, 12, 24));
  const auto pr = kp_pair(dom, 0.6);
  const auto res = deform::kp_residual_sequence(ws, pr, {0.08, 0.05, 0.03}, 0.4, 2);
  const double slope = std::log2(res[0] / res[1]);
  const bool pass = slope >= 1.7 && slope <= 2.3;
  line(8, "kp residual", pass,
       fmt("richardson slope %.2f (2.0 +- 0.3); residuals %.3e -> %.3e -> %.3e (floor below)",
           slope, res[0], res[1], res[2]));
}

void criterion_9_nls_stack() {
  const nls::NLSScenario s = nls_scenario();
  nls::NLSWorkspace w(s, 12, 24);
  const auto sol = w.solve_at(s.x, s.t);
  const double schwarz = nls::schwarz_residual(sol);
  const double dpsi = nls::det2_psi_check(w, s.x, s.t, 1e-2);

  auto slope_and_plateau = [&](const std::vector<double>& r) {
    // best slope over the monotone-decay prefix; plateau once the decay stalls
    size_t end = r.size();
    for (size_t i = 0; i + 1 < r.size(); ++i)
      if (!(r[i + 1] < r[i])) {
        end = i + 1;
        break;
      }
    double best = 0.0;
    bool plateau = end < r.size();
    for (size_t i = 0; i + 1 < end; ++i) {
      const double sl = std::log2(r[i] / r[i + 1]);
      best = std::max(best, sl);
      if (sl < 1.0) plateau = true;
    }
    return std::make_pair(best, plateau);
  };
  std::vector<double> zc, nl, ck;
  auto flattened = [](const std::vector<double>& r) {
    for (size_t i = 0; i + 1 < r.size(); ++i)
      if (std::log2(r[i] / r[i + 1]) < 1.0) return true;
    return false;
  };
  double h = 0.05;
  for (int l = 0; l < 13; ++l) {
    zc.push_back(nls::zero_curvature_residual(w, s.x, s.t, h));
    nl.push_back(nls::nls_residual(w, s.x, s.t, h));
    ck.push_back(nls::cmkdv_residual(w, s.x, s.t, h));
    h *= 0.5;
    if (l >= 2 && flattened(zc) && flattened(nl) && flattened(ck)) break;
  }
  const auto [zs, zp] = slope_and_plateau(zc);
  const auto [ns, np] = slope_and_plateau(nl);
  const auto [cs, cp] = slope_and_plateau(ck);
  auto in_range = [](double sl) { return sl >= 1.7 && sl <= 2.3; };
  const bool pass = in_range(zs) && in_range(ns) && in_range(cs) && zp && np && cp &&
                    schwarz <= 1e-8 && dpsi <= 1e-3;
  line(9, "nls stack", pass,
       fmt("slopes zc/nls/cmkdv %.2f/%.2f/%.2f (2.0 +- 0.3, plateau %d%d%d), schwarz %.2e "
           "(1e-8), det2-|psi|^2 %.2e (1e-3)",
           zs, ns, cs, int(zp), int(np), int(cp), schwarz, dpsi));
}

void criterion_10_rh() {
  nls::NLSScenario s;
  s.domain.kind = geom::DomainKind::ellipse;
  s.domain.center = cplx(0, 1);
  s.domain.a = 0.5;
  s.domain.b = 0.25;
  s.beta.kind = field::ProfileKind::constant;
  s.beta.value = 1.0;
  s.x = 0.2;
  s.t = 0.0;
  nls::NLSWorkspace w(s, 16, 32);
  const auto sol = w.solve_at(s.x, s.t);
  const nls::RHReduction rh(s, 48);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const cplx z = std::polar(3.0 + 7.0 * k / 9.0, 0.63 * k);
    worst = std::max(worst, (rh.evaluate(z) - sol.evaluate(z)).norm());
  }
  const cplx p2 = nls::psi_extract(sol).psi;
  const double prel = std::abs(rh.psi() - p2) / std::abs(p2);
  const bool pass = worst <= 1e-4 && prel <= 1e-3;
  line(10, "riemann-hilbert reduction", pass,
       fmt("Gamma agreement %.3e (1e-4) at 10 probes, psi agreement %.3e (1e-3)", worst, prel));
}

void criterion_11_geometry() {
  const double a = 2.0, b = 1.0;
  geom::DomainSpec dom;
  dom.kind = geom::DomainKind::ellipse;
  dom.a = a;
  dom.b = b;
  auto cont = geom::boundary_contour(dom, 128);
  auto grid = geom::build_grid(dom, 16, 32);
  auto mb = geom::mother_body(a, b, 48);
  double worst = 0.0;
  for (int p = 0; p <= 4; ++p) {
    cplx boundary = 0.0, body = 0.0, area = 0.0;
    for (int k = 0; k < cont.nodes.size(); ++k)
      boundary += std::pow(cont.nodes[k], p) * geom::schwarz_ellipse(a, b, cont.nodes[k]) *
                  cont.dz[k];
    boundary /= cplx(0, 2 * kPi);
    for (int k = 0; k < mb.nodes.size(); ++k) body += std::pow(mb.nodes[k], p) * mb.dz[k];
    body /= cplx(0, 2 * kPi);
    for (int k = 0; k < grid.size(); ++k)
      area += grid.weights[k] * std::pow(grid.nodes[k], p);
    area /= kPi;
    worst = std::max(worst, std::abs(boundary - area));
    worst = std::max(worst, std::abs(body - area));
  }
  line(11, "geometry identities", worst <= 1e-8,
       fmt("contour/mother-body vs area, degree <= 4: worst gap %.3e (tol 1e-8)", worst));
}

}  // namespace

int main() {
  std::printf("acceptance checks (NLS base scenario: beta = 1 on disk(i, 1/2))\n");
  criterion_1_unimodularity();
  criterion_2_resolvent();
  criterion_3_determinant_paths();
  criterion_4_variational();
  criterion_5_closedness();
  criterion_6_miwa();
  criterion_7_hirota();
  criterion_8_kp();
  criterion_9_nls_stack();
  criterion_10_rh();
  criterion_11_geometry();
  if (g_failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures;
}
