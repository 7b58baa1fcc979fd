#include "kernel.hpp"

#include <cmath>

#include "linalg.hpp"

namespace dbar::kernel {

namespace {
double splitting_radius(const geom::DomainSpec& dom) { return 1e-4 * dom.diameter_bound(); }

Mat2 inv2(const Mat2& G) {
  const cplx det = G.determinant();
  if (std::abs(det) < 1e-300)
    throw Error(ErrorCode::solver_failure, "resolvent: singular Gamma factor");
  Mat2 out;
  out << G(1, 1), -G(0, 1), -G(1, 0), G(0, 0);
  return out / det;
}
}  // namespace

KernelPair poly_pair(const geom::DomainSpec& dom, cplx c, const field::ScalarProfile& p,
                     const field::ScalarProfile& q) {
  if (c == 0.0) throw Error(ErrorCode::invalid_argument, "poly_pair: c must be nonzero");
  KernelPair kp;
  kp.support = dom;
  const cplx s = std::sqrt(c / kPi);
  kp.f = [dom, s, p, q](cplx z) {
    MatrixXcd F = MatrixXcd::Zero(2, 1);
    if (dom.contains(z)) {
      F(0, 0) = s * p(z);
      F(1, 0) = s * q(z);
    }
    return F;
  };
  kp.g = [dom, s, p, q](cplx z) {
    MatrixXcd G = MatrixXcd::Zero(2, 1);
    if (dom.contains(z)) {
      G(0, 0) = s * q(z);
      G(1, 0) = -s * p(z);
    }
    return G;
  };
  kp.dzf = [dom, s, p, q](cplx z) {
    MatrixXcd F = MatrixXcd::Zero(2, 1);
    if (dom.contains(z)) {
      F(0, 0) = s * p.dz(z);
      F(1, 0) = s * q.dz(z);
    }
    return F;
  };
  return kp;
}

KernelPair constant_nilpotent_pair(const geom::DomainSpec& dom, cplx c) {
  KernelPair kp;
  kp.support = dom;
  const cplx s = std::sqrt(c / kPi);
  kp.f = [dom, s](cplx z) {
    MatrixXcd F = MatrixXcd::Zero(2, 1);
    if (dom.contains(z)) F(0, 0) = s;
    return F;
  };
  kp.g = [dom, s](cplx z) {
    MatrixXcd G = MatrixXcd::Zero(2, 1);
    if (dom.contains(z)) G(1, 0) = s;
    return G;
  };
  kp.dzf = [](cplx) { return MatrixXcd::Zero(2, 1); };
  return kp;
}

KernelPair table_pair(const geom::QuadratureGrid& grid, std::vector<Vec2> fvals,
                      std::vector<Vec2> gvals) {
  const int N = grid.size();
  if (static_cast<int>(fvals.size()) != N || static_cast<int>(gvals.size()) != N)
    throw Error(ErrorCode::invalid_argument, "table_pair: one value per grid node required");
  auto nodes = std::make_shared<VectorXcd>(grid.nodes);
  const double snap = 1e-9 * std::max(1.0, grid.domain.diameter_bound());
  auto lookup = [nodes, snap](cplx z) {
    int best = 0;
    double dmin = 1e300;
    for (int k = 0; k < nodes->size(); ++k) {
      const double d = std::abs((*nodes)[k] - z);
      if (d < dmin) {
        dmin = d;
        best = k;
      }
    }
    if (dmin > snap)
      throw Error(ErrorCode::not_supported, "table_pair: off-grid evaluation not supported");
    return best;
  };
  // local least-squares d/dz per node, precomputed (documented accuracy loss)
  auto dzf = std::make_shared<std::vector<Vec2>>(fvals.size());
  {
    for (const auto& comp : grid.comps) {
      const int nr = comp.nr, nt = comp.nt;
      for (int i = 0; i < nr; ++i)
        for (int l = 0; l < nt; ++l) {
          const int j = comp.offset + i * nt + l;
          std::vector<int> nbr;
          for (int ii = std::max(0, i - 2); ii <= std::min(nr - 1, i + 2); ++ii)
            for (int dl = -2; dl <= 2; ++dl) {
              const int k = comp.offset + ii * nt + ((l + dl) % nt + nt) % nt;
              if (k != j) nbr.push_back(k);
            }
          MatrixXcd V(nbr.size() + 1, 6);
          MatrixXcd rhs(nbr.size() + 1, 2);
          auto fill = [&](int row, cplx dz) {
            const cplx db = std::conj(dz);
            V(row, 0) = 1.0;
            V(row, 1) = dz;
            V(row, 2) = db;
            V(row, 3) = dz * dz;
            V(row, 4) = dz * db;
            V(row, 5) = db * db;
          };
          fill(0, 0.0);
          rhs.row(0) = fvals[j].transpose();
          for (size_t n = 0; n < nbr.size(); ++n) {
            fill(static_cast<int>(n) + 1, grid.nodes[nbr[n]] - grid.nodes[j]);
            rhs.row(n + 1) = fvals[nbr[n]].transpose();
          }
          const MatrixXcd coef = V.colPivHouseholderQr().solve(rhs);
          (*dzf)[j] = coef.row(1).transpose();
        }
    }
  }
  KernelPair kp;
  kp.support = grid.domain;
  auto fv = std::make_shared<std::vector<Vec2>>(std::move(fvals));
  auto gv = std::make_shared<std::vector<Vec2>>(std::move(gvals));
  kp.f = [fv, lookup](cplx z) -> MatrixXcd { return (*fv)[lookup(z)]; };
  kp.g = [gv, lookup](cplx z) -> MatrixXcd { return (*gv)[lookup(z)]; };
  kp.dzf = [dzf, lookup](cplx z) -> MatrixXcd { return (*dzf)[lookup(z)]; };
  return kp;
}

double pair_constraint_violation(const KernelPair& p, const geom::QuadratureGrid& grid) {
  double worst = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const cplx z = grid.nodes[k];
    const MatrixXcd f = p.f(z), g = p.g(z);
    const double nf = f.norm(), ng = g.norm();
    if (nf * ng == 0.0) continue;
    worst = std::max(worst, (f.transpose() * g).norm() / (nf * ng));
    if (p.dzbarf) worst = std::max(worst, (p.dzbarf(z).transpose() * g).norm() / (nf * ng));
  }
  return worst;
}

void require_valid_pair(const KernelPair& p, const geom::QuadratureGrid& grid, double tol) {
  for (int k = 0; k < grid.size(); ++k) {
    const cplx z = grid.nodes[k];
    const MatrixXcd f = p.f(z), g = p.g(z);
    const double nf = f.norm(), ng = g.norm();
    if (nf * ng == 0.0) continue;
    double v = (f.transpose() * g).norm() / (nf * ng);
    if (p.dzbarf) v = std::max(v, (p.dzbarf(z).transpose() * g).norm() / (nf * ng));
    if (v > tol)
      throw Error(ErrorCode::invalid_argument,
                  "kernel pair constraint violated at node " + std::to_string(k));
  }
}

MatrixXcd kernel_eval(const KernelPair& p, cplx z, cplx w) {
  const cplx d = z - w;
  if (std::abs(d) < splitting_radius(p.support))
    return p.dzf(z).transpose() * p.g(w);  // first-order form; exact on the diagonal
  return (p.f(z).transpose() * p.g(w)) / d;
}

field::MatrixField m_from_pair(const KernelPair& p) {
  field::MatrixField M;
  M.rows = p.r;
  M.cols = p.r;
  M.support = p.support;
  auto f = p.f, g = p.g;
  M.eval = [f, g](cplx z) -> MatrixXcd { return kPi * f(z) * g(z).transpose(); };
  M.traceless = true;
  M.nilpotent = true;
  return M;
}

DiscreteOperator discretize(const KernelPair& p, const geom::QuadratureGrid& grid) {
  const int N = grid.size(), n = p.n;
  DiscreteOperator op;
  op.n = n;
  op.grid = &grid;
  op.A.resize(n * N, n * N);
  std::vector<MatrixXcd> fv(N), gv(N), dfv(N);
  for (int k = 0; k < N; ++k) {
    fv[k] = p.f(grid.nodes[k]);
    gv[k] = p.g(grid.nodes[k]);
    dfv[k] = p.dzf(grid.nodes[k]);
  }
  VectorXd sw = grid.weights.cwiseSqrt();
  const double split = splitting_radius(p.support);
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      MatrixXcd Kkl;
      const cplx d = grid.nodes[k] - grid.nodes[l];
      if (k == l || std::abs(d) < split)
        Kkl = dfv[k].transpose() * gv[l];
      else
        Kkl = (fv[k].transpose() * gv[l]) / d;
      op.A.block(k * n, l * n, n, n) = sw[k] * sw[l] * Kkl;
    }
  }
  return op;
}

MatrixXcd resolvent_eval(const KernelPair& p, const core::Solution& s, cplx z, cplx w) {
  const Mat2 Gz = s.evaluate(z);
  const Mat2 Gw = s.evaluate(w);
  const Mat2 GwTinv = inv2(Gw).transpose();
  const cplx d = z - w;
  if (std::abs(d) < splitting_radius(p.support)) {
    const Mat2 dGz = s.z_derivative(z);
    const MatrixXcd num = (p.dzf(z).transpose() * Gz.transpose() +
                           p.f(z).transpose() * dGz.transpose()) *
                          GwTinv * p.g(w);
    return num;
  }
  return (p.f(z).transpose() * Gz.transpose() * GwTinv * p.g(w)) / d;
}

DiscreteOperator discretize_resolvent(const KernelPair& p, const core::Solution& s) {
  const auto& grid = s.workspace().grid();
  const int N = grid.size(), n = p.n;
  DiscreteOperator op;
  op.n = n;
  op.grid = &grid;
  op.A.resize(n * N, n * N);
  const auto dG = s.z_derivative_at_nodes();
  std::vector<MatrixXcd> Fv(N), Gvinv(N), dFv(N);
  for (int k = 0; k < N; ++k) {
    const cplx z = grid.nodes[k];
    const Mat2& Gk = s.value(k);
    Fv[k] = p.f(z).transpose() * Gk.transpose();                       // (n x r)*(r x r)
    Gvinv[k] = inv2(Gk).transpose() * p.g(z);                          // (r x r)*(r x n)
    dFv[k] = p.dzf(z).transpose() * Gk.transpose() +
             p.f(z).transpose() * dG[k].transpose();
  }
  VectorXd sw = grid.weights.cwiseSqrt();
  const double split = splitting_radius(p.support);
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      MatrixXcd Rkl;
      const cplx d = grid.nodes[k] - grid.nodes[l];
      if (k == l || std::abs(d) < split)
        Rkl = dFv[k] * Gvinv[l];
      else
        Rkl = (Fv[k] * Gvinv[l]) / d;
      op.A.block(k * n, l * n, n, n) = sw[k] * sw[l] * Rkl;
    }
  }
  return op;
}

double resolvent_identity_residual(const KernelPair& p, const core::Solution& s,
                                   const geom::QuadratureGrid& grid) {
  const DiscreteOperator A = discretize(p, grid);
  const DiscreteOperator R = discretize_resolvent(p, s);
  const MatrixXcd E = R.A * A.A - R.A + A.A;
  return lin::norm2_estimate(E);
}

}  // namespace dbar::kernel
