#include "cauchy.hpp"

#include <cmath>

#include "linalg.hpp"

namespace dbar::cauchy {

namespace {
constexpr int kSubQuad = 24;  // Gauss points per radial subinterval

struct SubRule {
  VectorXd x, w;
};

SubRule& base_rule() {
  static SubRule r = [] {
    SubRule s;
    lin::gauss_legendre(kSubQuad, 0.0, 1.0, s.x, s.w);
    return s;
  }();
  return r;
}
}  // namespace

// Exact-per-mode Cauchy weights for one disk component.
//
// In local coordinates zeta = z - center, with density modes
// phihat_m(rho) = (1/nt) sum_l phi(rho, theta_l) e^{-i m theta_l}:
//
//   C[phi](zeta) =  2 sum_{m>=1} e^{i(m-1)al} Jp_m(r)  -  2 sum_{m<=0} e^{i(m-1)al} Jm_m(r)
//   Jp_m(r) = int_r^R phihat_m(rho) (r/rho)^{m-1} drho
//   Jm_m(r) = int_0^r phihat_m(rho) (rho/r)^{1-m} drho
//
// and the z-derivative adds (m-1)/r factors plus a local term -e^{-2 i al} phi(z).
// The radial interpolant through the Gauss radii is integrated subinterval-exactly.
struct CauchyOp::DiskModes {
  const geom::GridComponent* gc;
  double R;
  VectorXd rho;    // physical radii
  VectorXd bary;   // barycentric weights (normalized)
  std::vector<int> ms;             // fft mode set: 0..nt/2-1, -nt/2..-1
  std::vector<MatrixXd> Wp;        // Wp[m-1] for m = 1..nt/2-1? indexed by position in mpos
  std::vector<MatrixXd> Wm;        // Wm[k] for m = -k, k = 0..nt/2
  std::vector<int> mpos, mneg;

  explicit DiskModes(const geom::GridComponent& c) : gc(&c) {
    R = c.spec.a;
    const int nr = c.nr, nt = c.nt;
    rho = R * c.lambda;
    bary.resize(nr);
    for (int j = 0; j < nr; ++j) {
      double p = 1.0;
      for (int k = 0; k < nr; ++k)
        if (k != j) p *= (rho[j] - rho[k]);
      bary[j] = 1.0 / p;
    }
    bary /= bary.cwiseAbs().maxCoeff();
    for (int m = 0; m < nt / 2; ++m) ms.push_back(m);
    for (int m = -nt / 2; m < 0; ++m) ms.push_back(m);
    // mpos/mneg are power-recursion ordered: u^{m-1} for m = 1,2,... and v^{1-m} for m = 0,-1,...
    for (int m = 1; m < nt / 2; ++m) mpos.push_back(m);
    for (int m = 0; m >= -nt / 2; --m) mneg.push_back(m);
    Wp.assign(mpos.size(), MatrixXd::Zero(nr, nr));
    Wm.assign(mneg.size(), MatrixXd::Zero(nr, nr));
    VectorXd L(nr);
    for (int it = 0; it < nr; ++it) {
      accumulate_outer(rho[it], Wp, it);
      accumulate_inner(rho[it], Wm, it);
    }
  }

  void lagrange_at(double x, VectorXd& L) const {
    const int nr = static_cast<int>(rho.size());
    L.resize(nr);
    double denom = 0.0;
    for (int j = 0; j < nr; ++j) {
      const double d = x - rho[j];
      if (std::abs(d) < 1e-300) {
        L.setZero();
        L[j] = 1.0;
        return;
      }
      L[j] = bary[j] / d;
      denom += L[j];
    }
    L /= denom;
  }

  // Jp weights for all m >= 1 into W[...] row `it`, target radius r.
  template <typename Sink>
  void outer_integrals(double r, Sink&& sink) const {
    if (r >= R) return;
    const SubRule& q = base_rule();
    std::vector<double> bnds;
    bnds.push_back(r);
    for (int i = 0; i < rho.size(); ++i)
      if (rho[i] > r) bnds.push_back(rho[i]);
    if (bnds.back() < R) bnds.push_back(R);
    VectorXd L;
    for (size_t s = 0; s + 1 < bnds.size(); ++s) {
      const double a = bnds[s], b = bnds[s + 1], h = b - a;
      if (h <= 0) continue;
      for (int g = 0; g < kSubQuad; ++g) {
        const double x = a + h * q.x[g];
        const double wq = h * q.w[g];
        lagrange_at(x, L);
        const double u = r / x;
        double up = 1.0;  // u^{m-1}, m = 1, 2, ...
        for (size_t mi = 0; mi < mpos.size(); ++mi) {
          sink(mi, wq * up, L);
          up *= u;
        }
      }
    }
  }

  template <typename Sink>
  void inner_integrals(double r, Sink&& sink) const {
    const double rr = std::min(r, R);
    if (!(rr > 0.0)) return;
    const SubRule& q = base_rule();
    std::vector<double> bnds;
    bnds.push_back(0.0);
    for (int i = 0; i < rho.size(); ++i)
      if (rho[i] < rr) bnds.push_back(rho[i]);
    if (bnds.back() < rr) bnds.push_back(rr);
    VectorXd L;
    for (size_t s = 0; s + 1 < bnds.size(); ++s) {
      const double a = bnds[s], b = bnds[s + 1], h = b - a;
      if (h <= 0) continue;
      for (int g = 0; g < kSubQuad; ++g) {
        const double x = a + h * q.x[g];
        const double wq = h * q.w[g];
        lagrange_at(x, L);
        const double v = x / r;
        double vp = v;  // v^{1-m}, m = 0, -1, ...
        for (size_t mi = 0; mi < mneg.size(); ++mi) {
          sink(mi, wq * vp, L);
          vp *= v;
        }
      }
    }
  }

  void accumulate_outer(double r, std::vector<MatrixXd>& W, int it) {
    outer_integrals(r, [&](size_t mi, double c, const VectorXd& L) {
      W[mi].row(it) += c * L.transpose();
    });
  }
  void accumulate_inner(double r, std::vector<MatrixXd>& W, int it) {
    inner_integrals(r, [&](size_t mi, double c, const VectorXd& L) {
      W[mi].row(it) += c * L.transpose();
    });
  }

  // Assemble the same-component block. `strong` selects the z-derivative kernel.
  void block(MatrixXcd& out, int row0, int col0, bool strong) const {
    const int nr = gc->nr, nt = gc->nt;
    MatrixXcd Pt(nt, ms.size()), Ps(ms.size(), nt);
    for (size_t mi = 0; mi < ms.size(); ++mi) {
      const int m = ms[mi];
      const int tpow = strong ? m - 2 : m - 1;
      for (int l = 0; l < nt; ++l) {
        Pt(l, mi) = std::polar(1.0, tpow * gc->theta[l]);
        Ps(mi, l) = std::polar(1.0, -m * gc->theta[l]) / double(nt);
      }
    }
    VectorXcd coef(ms.size());
    for (int it = 0; it < nr; ++it) {
      for (int is = 0; is < nr; ++is) {
        for (size_t k = 0; k < mpos.size(); ++k) {
          const int m = mpos[k];
          const size_t mi = static_cast<size_t>(m);  // mpos are ms[1..]: ms[i]=i for i<nt/2
          double c = 2.0 * Wp[k](it, is);
          if (strong) c *= (m - 1) / rho[it];
          coef[mi] = c;
        }
        for (size_t k = 0; k < mneg.size(); ++k) {
          const int m = mneg[k];
          const size_t mi = static_cast<size_t>(m == 0 ? 0 : (int)ms.size() + m);
          double c = -2.0 * Wm[k](it, is);
          if (strong) c *= (m - 1) / rho[it];
          coef[mi] = c;
        }
        MatrixXcd blk = Pt * coef.asDiagonal() * Ps;  // (nt, nt)
        out.block(row0 + it * nt, col0 + is * nt, nt, nt) += blk;
      }
    }
    if (strong) {
      // local term: -e^{-2 i theta_t} phi(target) on the diagonal
      for (int it = 0; it < nr; ++it)
        for (int l = 0; l < nt; ++l) {
          const int j = it * nt + l;
          out(row0 + j, col0 + j) += -std::polar(1.0, -2.0 * gc->theta[l]);
        }
    }
  }

  void row(cplx z, RowVectorXcd& out, int col0, bool strong) const {
    const int nr = gc->nr, nt = gc->nt;
    const cplx zeta = z - gc->spec.center;
    double r = std::abs(zeta);
    const double al = (r > 0.0) ? std::arg(zeta) : 0.0;
    if (r == 0.0) r = 1e-30 * R;  // center target: only the m<=0 terms and m==2 derivative survive
    std::vector<VectorXd> wp(mpos.size(), VectorXd::Zero(nr));
    std::vector<VectorXd> wm(mneg.size(), VectorXd::Zero(nr));
    outer_integrals(r, [&](size_t mi, double c, const VectorXd& L) { wp[mi] += c * L; });
    inner_integrals(r, [&](size_t mi, double c, const VectorXd& L) { wm[mi] += c * L; });
    for (size_t k = 0; k < mpos.size(); ++k) {
      const int m = mpos[k];
      if (strong && m == 1) continue;
      cplx c = 2.0 * std::polar(1.0, (strong ? m - 2 : m - 1) * al);
      if (strong) c *= double(m - 1) / r;
      for (int is = 0; is < nr; ++is) {
        const cplx ci = c * wp[k][is] / double(nt);
        if (ci == 0.0) continue;
        for (int l = 0; l < nt; ++l)
          out[col0 + is * nt + l] += ci * std::polar(1.0, -m * gc->theta[l]);
      }
    }
    for (size_t k = 0; k < mneg.size(); ++k) {
      const int m = mneg[k];
      cplx c = -2.0 * std::polar(1.0, (strong ? m - 2 : m - 1) * al);
      if (strong) c *= double(m - 1) / r;
      for (int is = 0; is < nr; ++is) {
        const cplx ci = c * wm[k][is] / double(nt);
        if (ci == 0.0) continue;
        for (int l = 0; l < nt; ++l)
          out[col0 + is * nt + l] += ci * std::polar(1.0, -m * gc->theta[l]);
      }
    }
    if (strong && r < R) {
      // interpolation weights for -e^{-2 i al} phi(z)
      VectorXd L;
      lagrange_at(r, L);
      for (size_t mi = 0; mi < ms.size(); ++mi) {
        const int m = ms[mi];
        const cplx c = -std::polar(1.0, (m - 2) * al) / double(nt);
        for (int is = 0; is < nr; ++is) {
          if (L[is] == 0.0) continue;
          for (int l = 0; l < nt; ++l)
            out[col0 + is * nt + l] += c * L[is] * std::polar(1.0, -m * gc->theta[l]);
        }
      }
    }
  }
};

CauchyOp::CauchyOp(const geom::QuadratureGrid& grid) : grid_(&grid) {
  for (const auto& gc : grid.comps) {
    if (gc.spec.is_disk())
      modes_.push_back(std::make_unique<DiskModes>(gc));
    else
      modes_.push_back(nullptr);
  }
}

CauchyOp::~CauchyOp() = default;

void CauchyOp::plain_block(int tc, int sc, MatrixXcd& out, bool strong) const {
  const auto& T = grid_->comps[tc];
  const auto& S = grid_->comps[sc];
  for (int j = 0; j < T.nodes.size(); ++j) {
    const cplx zj = T.nodes[j];
    for (int k = 0; k < S.nodes.size(); ++k) {
      const cplx d = S.nodes[k] - zj;
      const cplx ker = strong ? 1.0 / (d * d) : 1.0 / d;
      out(T.offset + j, S.offset + k) = S.weights[k] / kPi * ker;
    }
  }
}

namespace {
cplx cauchy_of_one_inside(const geom::ComponentSpec& cs, cplx z, bool strong) {
  // (1/pi) iint dA/(w-z) inside a placed ellipse and its z-derivative.
  const double q = (cs.a - cs.b) / (cs.a + cs.b);
  cplx zz = z;
  if (cs.mirror) zz = std::conj(zz);
  const cplx c0 = cs.mirror ? std::conj(cs.center) : cs.center;
  const cplx rot = std::polar(1.0, cs.rotation);
  const cplx zt = std::conj(rot) * (zz - c0);
  if (strong) {
    cplx v = q / (rot * rot);
    return cs.mirror ? std::conj(v) : v;
  }
  cplx v = (1.0 / rot) * (-(std::conj(zt) - q * zt));
  return cs.mirror ? std::conj(v) : v;
}
}  // namespace

void CauchyOp::ellipse_self_block(int c, MatrixXcd& out, bool strong) const {
  const auto& C = grid_->comps[c];
  const int n = static_cast<int>(C.nodes.size());
  for (int j = 0; j < n; ++j) {
    const cplx zj = C.nodes[j];
    cplx rowsum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const cplx d = C.nodes[k] - zj;
      const cplx ker = strong ? 1.0 / (d * d) : 1.0 / d;
      const cplx v = C.weights[k] / kPi * ker;
      out(C.offset + j, C.offset + k) = v;
      rowsum += v;
    }
    out(C.offset + j, C.offset + j) = cauchy_of_one_inside(C.spec, zj, strong) - rowsum;
  }
}

const MatrixXcd& CauchyOp::weak() const {
  if (!weak_built_) {
    const int N = grid_->size();
    weak_.setZero(N, N);
    for (size_t t = 0; t < grid_->comps.size(); ++t)
      for (size_t s = 0; s < grid_->comps.size(); ++s) {
        if (t == s) {
          if (modes_[s])
            modes_[s]->block(weak_, grid_->comps[s].offset, grid_->comps[s].offset, false);
          else
            ellipse_self_block((int)s, weak_, false);
        } else {
          plain_block((int)t, (int)s, weak_, false);
        }
      }
    weak_built_ = true;
  }
  return weak_;
}

const MatrixXcd& CauchyOp::strong() const {
  if (!strong_built_) {
    const int N = grid_->size();
    strong_.setZero(N, N);
    for (size_t t = 0; t < grid_->comps.size(); ++t)
      for (size_t s = 0; s < grid_->comps.size(); ++s) {
        if (t == s) {
          if (modes_[s])
            modes_[s]->block(strong_, grid_->comps[s].offset, grid_->comps[s].offset, true);
          else
            ellipse_self_block((int)s, strong_, true);
        } else {
          plain_block((int)t, (int)s, strong_, true);
        }
      }
    strong_built_ = true;
  }
  return strong_;
}

RowVectorXcd CauchyOp::weak_row(cplx z) const {
  RowVectorXcd out = RowVectorXcd::Zero(grid_->size());
  for (size_t s = 0; s < grid_->comps.size(); ++s) {
    const auto& S = grid_->comps[s];
    const bool inside_reach = modes_[s] != nullptr;
    if (inside_reach) {
      modes_[s]->row(z, out, S.offset, false);
    } else {
      for (int k = 0; k < S.nodes.size(); ++k)
        out[S.offset + k] = S.weights[k] / (kPi * (S.nodes[k] - z));
    }
  }
  return out;
}

RowVectorXcd CauchyOp::strong_row(cplx z) const {
  RowVectorXcd out = RowVectorXcd::Zero(grid_->size());
  for (size_t s = 0; s < grid_->comps.size(); ++s) {
    const auto& S = grid_->comps[s];
    if (modes_[s]) {
      modes_[s]->row(z, out, S.offset, true);
    } else {
      for (int k = 0; k < S.nodes.size(); ++k) {
        const cplx d = S.nodes[k] - z;
        out[S.offset + k] = S.weights[k] / (kPi * d * d);
      }
    }
  }
  return out;
}

}  // namespace dbar::cauchy
