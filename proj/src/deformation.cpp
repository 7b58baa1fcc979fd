#include "deformation.hpp"

#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "linalg.hpp"

namespace dbar::deform {

cplx xi_phase(cplx z, const TimeVector& t) {
  cplx acc = 0.0;
  for (size_t j = t.size(); j-- > 0;) acc = (acc + t[j]) * z;
  return acc;  // sum_j t_j z^j
}

cplx dz_xi_phase(cplx z, const TimeVector& t) {
  cplx acc = 0.0;
  for (size_t j = t.size(); j-- > 0;) acc = acc * z + double(j + 1) * t[j];
  return acc;  // sum_j j t_j z^{j-1}
}

static void check_times(const TimeVector& t) {
  if (t.empty() || t.size() > kMaxTimes)
    throw Error(ErrorCode::invalid_argument, "time vector size out of range");
  for (cplx v : t)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::invalid_argument, "time vector entries must be finite");
}

field::MatrixField dress(const field::MatrixField& M0, const TimeVector& t,
                         double overflow_guard) {
  check_times(t);
  if (M0.rows != 2 || M0.cols != 2)
    throw Error(ErrorCode::invalid_argument, "dress: M0 must be 2x2");
  field::MatrixField M = M0;
  auto base = M0.eval;
  M.eval = [base, t, overflow_guard](cplx z) {
    MatrixXcd v = base(z);
    if (v.cwiseAbs().maxCoeff() == 0.0) return v;
    const cplx xi = xi_phase(z, t);
    if (std::abs(xi.real()) > overflow_guard) {
      std::ostringstream os;
      os << "dress: |Re xi| overflow at z = " << z.real() << (z.imag() < 0 ? "-" : "+")
         << std::abs(z.imag()) << "i";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
    const cplx e = std::exp(xi);
    v(0, 1) *= e;
    v(1, 0) /= e;
    return v;
  };
  M.dz = nullptr;  // dressed derivative is supplied by the callers that need it
  M.dzbar = nullptr;
  return M;
}

field::MatrixField dt_M(const field::MatrixField& M0, const TimeVector& t, int j) {
  if (j < 1 || j > static_cast<int>(t.size()))
    throw Error(ErrorCode::invalid_argument, "dt_M: flow index out of range");
  field::MatrixField Mt = dress(M0, t);
  field::MatrixField out = Mt;
  auto base = Mt.eval;
  out.eval = [base, j](cplx z) {
    MatrixXcd v = base(z);
    const cplx zj = std::pow(z, j);
    v(0, 0) = 0.0;
    v(1, 1) = 0.0;
    v(0, 1) *= zj;
    v(1, 0) *= -zj;
    return v;
  };
  out.traceless = true;
  out.nilpotent = false;
  return out;
}

field::MatrixField miwa_shift_M(const field::MatrixField& M, cplx zeta, int sign) {
  if (M.support.contains(zeta))
    throw Error(ErrorCode::invalid_argument, "miwa_shift_M: zeta must lie outside the support");
  field::MatrixField out = M;
  auto base = M.eval;
  out.eval = [base, zeta, sign](cplx z) {
    MatrixXcd v = base(z);
    const cplx fac = 1.0 - z / zeta;
    if (sign < 0) {
      v(0, 1) *= fac;
      v(1, 0) /= fac;
    } else {
      v(0, 1) /= fac;
      v(1, 0) *= fac;
    }
    return v;
  };
  return out;
}

namespace {
// Wrap a pair with a diagonal left factor diag(d(z), 1/d(z)) on f and its inverse on g.
kernel::KernelPair conjugated_pair(const kernel::KernelPair& p,
                                   std::function<cplx(cplx)> d,
                                   std::function<cplx(cplx)> dlog_dz) {
  kernel::KernelPair out = p;
  auto f = p.f, g = p.g, dzf = p.dzf;
  out.f = [f, d](cplx z) {
    MatrixXcd v = f(z);
    const cplx dd = d(z);
    v.row(0) *= dd;
    v.row(1) /= dd;
    return v;
  };
  out.g = [g, d](cplx z) {
    MatrixXcd v = g(z);
    const cplx dd = d(z);
    v.row(0) /= dd;
    v.row(1) *= dd;
    return v;
  };
  out.dzf = [f, dzf, d, dlog_dz](cplx z) {
    // d/dz [diag(d,1/d) f] = diag(d,1/d) (f' + (dlog) sigma3/1 ... row-wise)
    MatrixXcd v = dzf(z);
    MatrixXcd fv = f(z);
    const cplx dd = d(z), dl = dlog_dz(z);
    MatrixXcd out2(v.rows(), v.cols());
    out2.row(0) = dd * (v.row(0) + dl * fv.row(0));
    out2.row(1) = (v.row(1) - dl * fv.row(1)) / dd;
    return out2;
  };
  return out;
}
}  // namespace

kernel::KernelPair dress_pair(const kernel::KernelPair& p, const TimeVector& t) {
  check_times(t);
  return conjugated_pair(
      p, [t](cplx z) { return std::exp(xi_phase(z, t) / 2.0); },
      [t](cplx z) { return dz_xi_phase(z, t) / 2.0; });
}

kernel::KernelPair miwa_shift_pair(const kernel::KernelPair& p, cplx zeta, int sign) {
  if (p.support.contains(zeta))
    throw Error(ErrorCode::invalid_argument, "miwa_shift_pair: zeta inside the support");
  const double s = -0.5 * sign;  // minus shift: factor (1-z/zeta)^{+1/2} on row 1 of f
  return conjugated_pair(
      p, [zeta, s](cplx z) { return std::pow(1.0 - z / zeta, s); },
      [zeta, s](cplx z) { return s * (-1.0 / zeta) / (1.0 - z / zeta); });
}

const core::Solution& DeformationState::solution() {
  if (!cached_) cached_.emplace(core::solve(*ws, dress(M0, t)));
  return *cached_;
}

void DeformationState::set_time(const TimeVector& nt) {
  check_times(nt);
  t = nt;
  cached_.reset();
}

VectorXcd malgrange_components(DeformationState& st, int jmax) {
  const core::Solution& sol = st.solution();
  const auto& grid = st.ws->grid();
  const auto dG = sol.z_derivative_at_nodes();
  VectorXcd out = VectorXcd::Zero(jmax);
  for (int k = 0; k < grid.size(); ++k) {
    const Mat2& G = sol.value(k);
    const cplx det = G.determinant();
    Mat2 Gi;
    Gi << G(1, 1), -G(0, 1), -G(1, 0), G(0, 0);
    Gi /= det;
    const Mat2 T = Gi * dG[k];
    // dt_j M has entries (0,1): z^j M12, (1,0): -z^j M21 of the dressed field
    const MatrixXcd Mk = sol.source()(grid.nodes[k]);
    const cplx m12 = Mk(0, 1), m21 = Mk(1, 0);
    cplx zj = grid.nodes[k];
    for (int j = 1; j <= jmax; ++j) {
      // tr(T * dtM) with dtM = [[0, zj m12], [-zj m21, 0]]
      const cplx tr = T(0, 1) * (-zj * m21) + T(1, 0) * (zj * m12);
      out[j - 1] -= grid.weights[k] / kPi * tr;
      zj *= grid.nodes[k];
    }
  }
  return out;
}

cplx malgrange_component(DeformationState& st, int j) {
  if (j < 1 || j > static_cast<int>(st.t.size()))
    throw Error(ErrorCode::invalid_argument, "malgrange_component: flow index out of range");
  return malgrange_components(st, j)[j - 1];
}

cplx tau_log_increment_segment(DeformationState& st, const TimeVector& t_from,
                               const TimeVector& t_to, int gauss_points) {
  if (t_from.size() != t_to.size())
    throw Error(ErrorCode::invalid_argument, "tau path: segment endpoint sizes differ");
  const int J = static_cast<int>(t_from.size());
  VectorXd gx, gw;
  lin::gauss_legendre(gauss_points, 0.0, 1.0, gx, gw);
  cplx acc = 0.0;
  for (int q = 0; q < gauss_points; ++q) {
    TimeVector tt(J);
    for (int j = 0; j < J; ++j) tt[j] = t_from[j] + gx[q] * (t_to[j] - t_from[j]);
    st.set_time(tt);
    VectorXcd om;
    try {
      om = malgrange_components(st, J);
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " (path aborted at t = [";
      for (int j = 0; j < J; ++j) os << (j ? ", " : "") << tt[j].real();
      os << "])";
      throw Error(e.code(), os.str());
    }
    cplx v = 0.0;
    for (int j = 0; j < J; ++j) v += om[j] * (t_to[j] - t_from[j]);
    acc += gw[q] * v;
  }
  return acc;
}

cplx tau_along_path(DeformationState& st, const std::vector<TimeVector>& path, int gauss_points) {
  if (path.size() < 2) throw Error(ErrorCode::invalid_argument, "tau path: need >= 2 vertices");
  cplx total = 0.0;
  for (size_t s = 0; s + 1 < path.size(); ++s)
    total += tau_log_increment_segment(st, path[s], path[s + 1], gauss_points);
  st.set_time(path.back());
  st.log_tau += total;
  return total;
}

double connection_check(DeformationState& st, cplx zeta, int sign) {
  const core::Solution& sol = st.solution();
  const Mat2 Gz = sol.evaluate(zeta);
  const Mat2 G1 = sol.moment1();
  const double pivot = std::abs(sign < 0 ? Gz(0, 0) : Gz(1, 1));
  if (pivot < 1e-10)
    throw Error(ErrorCode::solver_failure, "Miwa-shift singularity: vanishing pivot at zeta");

  field::MatrixField Ms = miwa_shift_M(dress(st.M0, st.t), zeta, sign);
  const core::Solution sols = core::solve(*st.ws, Ms);

  // probe ring relative to the support
  const double R0 = 0.5 * st.M0.support.diameter_bound();
  const cplx c0 = st.M0.support.center;
  std::vector<cplx> probes;
  for (double fac : {0.45, 0.7, 1.6, 2.6, 3.4}) {
    for (double ang : {0.31, 2.13, 4.37}) {
      const cplx z = c0 + fac * R0 * std::polar(1.0, ang);
      if (std::abs(z - zeta) > 0.2 * R0) probes.push_back(z);
    }
  }
  double worst = 0.0;
  for (cplx z : probes) {
    Mat2 C, D = Mat2::Identity();
    const cplx fac = 1.0 - z / zeta;
    if (sign < 0) {
      const cplx b12 = G1(0, 1);
      C << fac - b12 * Gz(1, 0) / (zeta * Gz(0, 0)), b12 / zeta, -Gz(1, 0) / Gz(0, 0), 1.0;
      D(0, 0) = fac;
    } else {
      const cplx b21 = G1(1, 0);
      C << 1.0, -Gz(0, 1) / Gz(1, 1), b21 / zeta, fac - b21 * Gz(0, 1) / (zeta * Gz(1, 1));
      D(1, 1) = fac;
    }
    const Mat2 pred = C * sol.evaluate(z) * D.inverse();
    worst = std::max(worst, (sols.evaluate(z) - pred).norm());
  }
  return worst;
}

namespace {
cplx continuous_log1m(cplx u) {
  // log(1 - u), branch continuous along the ray s u, s in [0,1].
  if (!(std::abs(u.imag()) < 1e-12 * std::abs(u) && u.real() >= 1.0))
    return std::log(1.0 - u);
  // On the cut: track through small steps (midpoint rule on d/ds log(1-su) = -u/(1-su)).
  cplx acc = 0.0;
  const int n = 256;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    acc += -u / (1.0 - s * u) / double(n);
  }
  return acc;
}
}  // namespace

cplx gamma_fn(const field::MatrixField& M0, const core::Workspace& ws, cplx zeta,
              GammaForm form) {
  if (M0.support.contains(zeta))
    throw Error(ErrorCode::invalid_argument, "gamma_fn: zeta must lie outside the support");
  const auto& grid = ws.grid();
  if (form == GammaForm::boundary_corrected) {
    // (1/pi) iint (M0)_{11}/(z - zeta) dA via the product quadrature row at zeta.
    const RowVectorXcd row = ws.cauchy().weak_row(zeta);
    cplx acc = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
      const cplx m11 = M0(grid.nodes[k])(0, 0);
      if (m11 != 0.0) acc += row[k] * m11;
    }
    return acc;
  }
  if (!M0.dz)
    throw Error(ErrorCode::invalid_argument, "gamma_fn(classical): M0 needs an analytic dz");
  cplx acc = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const cplx dm11 = M0.dz(grid.nodes[k])(0, 0);
    if (dm11 == 0.0) continue;
    acc += grid.weights[k] / kPi * (-continuous_log1m(grid.nodes[k] / zeta)) * dm11;
  }
  return acc;
}

TauRatioResult tau_ratio_check(const core::Workspace& ws, const kernel::KernelPair& base_pair,
                               const TimeVector& t, cplx zeta, int sign) {
  const kernel::KernelPair pt = dress_pair(base_pair, t);
  const kernel::KernelPair ps = miwa_shift_pair(pt, zeta, sign);
  const cplx d2_base = std::exp(det::logdet2_lu(kernel::discretize(pt, ws.grid()).A));
  const cplx d2_shift = std::exp(det::logdet2_lu(kernel::discretize(ps, ws.grid()).A));
  const cplx lhs = d2_shift / d2_base;

  field::MatrixField M0 = kernel::m_from_pair(base_pair);
  DeformationState st(ws, M0, t);
  const Mat2 Gz = st.solution().evaluate(zeta);
  const cplx gam = gamma_fn(M0, ws, zeta, GammaForm::boundary_corrected);
  const double pivot = std::abs(sign < 0 ? Gz(0, 0) : Gz(1, 1));
  if (pivot < 1e-10)
    throw Error(ErrorCode::solver_failure, "Miwa-shift singularity: vanishing pivot at zeta");
  const cplx rhs =
      (sign < 0) ? Gz(0, 0) * std::exp(gam) : Gz(1, 1) * std::exp(-gam);
  return {lhs, rhs, std::abs(lhs - rhs) / std::abs(rhs)};
}

cplx hirota_residue(const core::Workspace& ws, const field::MatrixField& M0, const TimeVector& t,
                    const TimeVector& s, double R, int n_contour) {
  const double need = 1.5 * 0.5 * M0.support.diameter_bound();
  if (R < need)
    throw Error(ErrorCode::invalid_argument, "hirota_residue: contour radius too small");
  const core::Solution solt = core::solve(ws, dress(M0, t));
  const core::Solution sols = core::solve(ws, dress(M0, s));
  const geom::ContourGrid circ = geom::circle_contour(0.0, R, n_contour);
  cplx acc = 0.0;
  for (int k = 0; k < circ.nodes.size(); ++k) {
    const cplx z = circ.nodes[k];
    acc += solt.evaluate(z)(0, 1) * sols.evaluate(z)(1, 0) * circ.dz[k];
  }
  return acc / cplx(0.0, 2.0 * kPi);
}

namespace {
// KP stencil offsets: F needed at (i,j,k) per the nested differences in kp_residual.
const std::vector<std::array<int, 3>>& kp_stencil() {
  static const std::vector<std::array<int, 3>> pts = [] {
    std::vector<std::array<int, 3>> need_u = {{0, 1, 0}, {0, 0, 0}, {0, -1, 0}};
    for (int i : {-1, 0, 1}) {
      need_u.push_back({i, 0, 1});
      need_u.push_back({i, 0, -1});
    }
    for (int i : {-2, -1, 0, 1, 2}) need_u.push_back({i, 0, 0});
    std::vector<std::array<int, 3>> pts2;
    auto add = [&pts2](std::array<int, 3> p) {
      for (const auto& q : pts2)
        if (q == p) return;
      pts2.push_back(p);
    };
    for (const auto& p : need_u)
      for (int di : {-1, 0, 1}) add({p[0] + di, p[1], p[2]});
    return pts2;
  }();
  return pts;
}

double kp_from_F(const std::map<std::array<int, 3>, cplx>& F, double h) {
  auto u = [&](int i, int j, int k) {
    return 2.0 * (F.at({i + 1, j, k}) - 2.0 * F.at({i, j, k}) + F.at({i - 1, j, k})) / (h * h);
  };
  const cplx u22 = (u(0, 1, 0) - 2.0 * u(0, 0, 0) + u(0, -1, 0)) / (h * h);
  auto u3 = [&](int i) { return (u(i, 0, 1) - u(i, 0, -1)) / (2.0 * h); };
  const cplx d1u3 = (u3(1) - u3(-1)) / (2.0 * h);
  const cplx u1111 = (u(2, 0, 0) - 4.0 * u(1, 0, 0) + 6.0 * u(0, 0, 0) - 4.0 * u(-1, 0, 0) +
                      u(-2, 0, 0)) /
                     (h * h * h * h);
  auto u1 = [&](int i) { return (u(i + 1, 0, 0) - u(i - 1, 0, 0)) / (2.0 * h); };
  auto gfun = [&](int i) { return u(i, 0, 0) * u1(i); };
  const cplx d1uu1 = (gfun(1) - gfun(-1)) / (2.0 * h);
  return std::abs(3.0 * u22 - (4.0 * d1u3 - u1111 - 6.0 * d1uu1));
}
}  // namespace

double kp_residual(const core::Workspace& ws, const kernel::KernelPair& base_pair,
                   const TimeVector& t0, double h, LogTauRoute route) {
  if (t0.size() < 3)
    throw Error(ErrorCode::invalid_argument, "kp_residual: needs t1, t2, t3 active");
  std::map<std::array<int, 3>, cplx> F;
  for (const auto& p : kp_stencil()) {
    TimeVector t = t0;
    t[0] += p[0] * h;
    t[1] += p[1] * h;
    t[2] += p[2] * h;
    if (route == LogTauRoute::det2_lu) {
      F[p] = det::logdet2_lu(kernel::discretize(dress_pair(base_pair, t), ws.grid()).A);
    } else {
      field::MatrixField M0 = kernel::m_from_pair(base_pair);
      DeformationState st(ws, M0, TimeVector(t.size(), 0.0));
      const TimeVector zero(t.size(), 0.0);
      TimeVector mid1 = zero, mid2 = zero;
      mid1[0] = t[0];
      mid2[0] = t[0];
      mid2[1] = t[1];
      F[p] = tau_along_path(st, {zero, mid1, mid2, t});
    }
  }
  return kp_from_F(F, h);
}

std::vector<double> kp_residual_sequence(const core::Workspace& ws,
                                         const kernel::KernelPair& base_pair,
                                         const TimeVector& t0, double h0, int halvings,
                                         LogTauRoute route) {
  std::vector<double> out;
  double h = h0;
  for (int i = 0; i <= halvings; ++i) {
    out.push_back(kp_residual(ws, base_pair, t0, h, route));
    h *= 0.5;
  }
  return out;
}

}  // namespace dbar::deform
