#include "dbar_core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "linalg.hpp"

namespace dbar::core {

Solution::Solution(const Workspace& ws, field::MatrixField M, std::vector<Mat2> values,
                   double rcond)
    : ws_(&ws), M_(std::move(M)), values_(std::move(values)), rcond_(rcond) {
  const int N = ws.size();
  gm_.resize(N);
  gm_cols_.resize(N, 4);
  for (int k = 0; k < N; ++k) {
    const MatrixXcd Mk = M_(ws.grid().nodes[k]);
    gm_[k] = values_[k] * Mk;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gm_cols_(k, i * 2 + j) = gm_[k](i, j);
  }
}

Mat2 Solution::moment1() const {
  Mat2 out = Mat2::Zero();
  const auto& g = ws_->grid();
  for (int k = 0; k < g.size(); ++k) out += g.weights[k] / kPi * gm_[k];
  return out;
}

Mat2 Solution::moment2() const {
  Mat2 out = Mat2::Zero();
  const auto& g = ws_->grid();
  for (int k = 0; k < g.size(); ++k) out += g.weights[k] / kPi * gm_[k] * g.nodes[k];
  return out;
}

Mat2 Solution::evaluate(cplx z) const {
  const RowVectorXcd row = ws_->cauchy().weak_row(z);
  Mat2 out = Mat2::Identity();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) -= (row * gm_cols_.col(i * 2 + j))(0);
  return out;
}

Mat2 Solution::z_derivative(cplx z) const {
  const RowVectorXcd row = ws_->cauchy().strong_row(z);
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = -(row * gm_cols_.col(i * 2 + j))(0);
  return out;
}

std::vector<Mat2> Solution::z_derivative_at_nodes() const {
  const MatrixXcd& D = ws_->cauchy().strong();
  const int N = ws_->size();
  MatrixXcd cols = -(D * gm_cols_);
  std::vector<Mat2> out(N);
  for (int k = 0; k < N; ++k) {
    out[k] << cols(k, 0), cols(k, 1), cols(k, 2), cols(k, 3);
  }
  return out;
}

void Solution::export_csv(std::ostream& os) const {
  os << "re_z,im_z,re_g11,im_g11,re_g12,im_g12,re_g21,im_g21,re_g22,im_g22\n";
  os.precision(17);
  const auto& g = ws_->grid();
  for (int k = 0; k < g.size(); ++k) {
    const Mat2& G = values_[k];
    os << g.nodes[k].real() << "," << g.nodes[k].imag();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) os << "," << G(i, j).real() << "," << G(i, j).imag();
    os << "\n";
  }
}

Solution solve(const Workspace& ws, const field::MatrixField& M, const SolveOptions& opts) {
  if (M.rows != 2 || M.cols != 2)
    throw Error(ErrorCode::invalid_argument, "solve: source field must be 2x2");
  const int N = ws.size();
  const MatrixXcd& Q = ws.cauchy().weak();

  // Unknown y[(k,a)] = Gamma_{i a}(z_k) for each row i; equations indexed (j,b):
  //   y[(j,b)] + sum_{k,a} Q(j,k) M_k(a,b) y[(k,a)] = delta_{ib}
  MatrixXcd A(2 * N, 2 * N);
  std::vector<Mat2> Mk(N);
  for (int k = 0; k < N; ++k) Mk[k] = M(ws.grid().nodes[k]);
  for (int k = 0; k < N; ++k) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const cplx m = Mk[k](a, b);
        for (int j = 0; j < N; ++j) A(2 * j + b, 2 * k + a) = Q(j, k) * m;
      }
  }
  A.diagonal().array() += 1.0;

  MatrixXcd B = MatrixXcd::Zero(2 * N, 2);
  for (int j = 0; j < N; ++j) {
    B(2 * j + 0, 0) = 1.0;
    B(2 * j + 1, 1) = 1.0;
  }
  const double rcond = lin::solve_inplace(A, B);
  if (rcond < opts.rcond_min)
    throw Error(ErrorCode::solver_failure,
                "operator Id - K not invertible at this discretization (rcond = " +
                    std::to_string(rcond) + ")");
  std::vector<Mat2> values(N);
  for (int k = 0; k < N; ++k) {
    values[k](0, 0) = B(2 * k + 0, 0);
    values[k](0, 1) = B(2 * k + 1, 0);
    values[k](1, 0) = B(2 * k + 0, 1);
    values[k](1, 1) = B(2 * k + 1, 1);
  }
  return Solution(ws, M, std::move(values), rcond);
}

double unimodularity_residual(const Solution& s) {
  double worst = 0.0;
  for (const Mat2& G : s.values())
    worst = std::max(worst, std::abs(G.determinant() - cplx(1.0, 0.0)));
  return worst;
}

double dbar_residual(const Solution& s) {
  const auto& grid = s.workspace().grid();
  double worst = 0.0;
  for (const auto& comp : grid.comps) {
    const int nr = comp.nr, nt = comp.nt;
    for (int i = 1; i + 1 < nr; ++i) {
      if (comp.lambda[i] > 0.9) continue;  // stay away from the support edge
      for (int l = 0; l < nt; l += 3) {
        const int j = comp.offset + i * nt + l;
        const cplx zj = grid.nodes[j];
        // gather nearest neighbours within the component
        std::vector<std::pair<double, int>> near;
        for (int ii = std::max(0, i - 2); ii <= std::min(nr - 1, i + 2); ++ii)
          for (int dl = -2; dl <= 2; ++dl) {
            const int ll = ((l + dl) % nt + nt) % nt;
            const int k = comp.offset + ii * nt + ll;
            if (k == j) continue;
            near.emplace_back(std::abs(grid.nodes[k] - zj), k);
          }
        std::sort(near.begin(), near.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const int K = std::min<int>(14, static_cast<int>(near.size()));
        // local LS fit: value ~ c0 + c1 dz + c2 dzb + c3 dz^2 + c4 dz dzb + c5 dzb^2
        MatrixXcd V(K + 1, 6);
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
        MatrixXcd rhs(K + 1, 4);
        for (int c = 0; c < 4; ++c) rhs(0, c) = s.value(j)(c / 2, c % 2);
        for (int n = 0; n < K; ++n) {
          const int k = near[n].second;
          fill(n + 1, grid.nodes[k] - zj);
          for (int c = 0; c < 4; ++c) rhs(n + 1, c) = s.value(k)(c / 2, c % 2);
        }
        const MatrixXcd coef = V.colPivHouseholderQr().solve(rhs);
        Mat2 db;
        db << coef(2, 0), coef(2, 1), coef(2, 2), coef(2, 3);
        worst = std::max(worst, (db - s.gm()[j]).norm());
      }
    }
  }
  return worst;
}

}  // namespace dbar::core
