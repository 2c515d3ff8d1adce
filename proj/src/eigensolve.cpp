#include "mcp/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mcp/model.hpp"

namespace mcp {

EigenResult dense_eigenpairs(const Mat& H, int k) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  const int n = static_cast<int>(H.rows());
  if (k < 0 || k > n) k = n;
  EigenResult r;
  r.values = es.eigenvalues().head(k);
  r.vectors = es.eigenvectors().leftCols(k);
  r.method = "dense";
  return r;
}

double max_residual(const CsrMatrix& H, const EigenResult& r) {
  double m = 0.0;
  for (int j = 0; j < r.values.size(); ++j) {
    Vec v = r.vectors.col(j);
    m = std::max(m, (H * v - r.values(j) * v).norm());
  }
  return m;
}

namespace {

Vec start_vector(int64_t n, int salt) {
  Vec v(n);
  for (int64_t i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i) + salt);
  return v.normalized();
}

// Two passes of classical Gram-Schmidt against the first m columns.
void orthogonalize(Mat& V, int m, Vec& w) {
  for (int pass = 0; pass < 2; ++pass) {
    Vec c = V.leftCols(m).transpose() * w;
    w.noalias() -= V.leftCols(m) * c;
  }
}

}  // namespace

EigenResult lanczos_lowest(const CsrMatrix& H, int k, const EigenOptions& opt) {
  const int64_t n = H.dim();
  if (k < 1 || k > n) throw ModelError("requested eigenpair count out of range");
  int mmax = opt.max_basis > 0 ? opt.max_basis : std::max(2 * k + 40, 80);
  mmax = static_cast<int>(std::min<int64_t>(mmax, n));
  if (mmax <= k) return dense_eigenpairs(H.to_dense(), k);

  Mat V(n, mmax + 1), AV(n, mmax);
  V.col(0) = start_vector(n, 0);
  int filled = 0;  // columns of V with AV computed
  int nbasis = 1;  // orthonormal columns in V
  int salt = 1;
  EigenResult res;
  res.method = "lanczos";
  const double scale = std::max(1.0, H.norm_bound());

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    while (filled < mmax) {
      Vec x = V.col(filled);
      Vec y(n);
      H.matvec(x.data(), y.data());
      ++res.matvecs;
      AV.col(filled) = y;
      ++filled;
      if (nbasis == filled) {
        Vec w = y;
        orthogonalize(V, nbasis, w);
        double beta = w.norm();
        if (beta < 1e-12 * scale) {
          // invariant subspace: continue with a fresh direction
          w = start_vector(n, salt++);
          orthogonalize(V, nbasis, w);
          beta = w.norm();
          if (beta < 1e-12) break;
        }
        V.col(nbasis++) = w / beta;
      }
    }
    const int m = filled;
    Mat T = V.leftCols(m).transpose() * AV.leftCols(m);
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    const int kk = std::min(k, m);
    Mat S = es.eigenvectors();
    Mat Y = V.leftCols(m) * S.leftCols(kk);
    Mat R = AV.leftCols(m) * S.leftCols(kk) - Y * es.eigenvalues().head(kk).asDiagonal();
    double worst = 0.0;
    for (int j = 0; j < kk; ++j) worst = std::max(worst, R.col(j).norm());
    if ((worst <= opt.tol * scale && kk == k) || m >= n) {
      res.values = es.eigenvalues().head(kk);
      res.vectors = Y;
      for (int j = 0; j < kk; ++j) res.vectors.col(j).normalize();
      res.max_residual = worst;
      return res;
    }
    // thick restart: keep the best Ritz vectors and the unexpanded direction
    const int keep = std::min(m - 1, k + std::max(10, k));
    Mat Vk = V.leftCols(m) * S.leftCols(keep);
    Mat AVk = AV.leftCols(m) * S.leftCols(keep);
    Vec tail;
    bool have_tail = nbasis > m;
    if (have_tail) tail = V.col(m);
    V.leftCols(keep) = Vk;
    AV.leftCols(keep) = AVk;
    filled = keep;
    nbasis = keep;
    Vec w = have_tail ? tail : start_vector(n, salt++);
    orthogonalize(V, nbasis, w);
    double nw = w.norm();
    if (nw < 1e-12) {
      w = start_vector(n, salt++);
      orthogonalize(V, nbasis, w);
      nw = w.norm();
    }
    V.col(nbasis++) = w / nw;
  }
  throw NumericalError("Lanczos did not converge within the restart cap");
}

EigenResult lowest_eigenpairs(const CsrMatrix& H, int k, const EigenOptions& opt) {
  if (k < 1 || k > H.dim()) throw ModelError("requested eigenpair count out of range");
  EigenResult r;
  if (H.dim() <= opt.dense_cutoff) {
    r = dense_eigenpairs(H.to_dense(), k);
  } else {
    r = lanczos_lowest(H, k, opt);
  }
  r.max_residual = max_residual(H, r);
  return r;
}

}  // namespace mcp
