#include "mcp/propagate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mcp/eigensolve.hpp"
#include "mcp/model.hpp"

namespace mcp {

KrylovPropagator::KrylovPropagator(const CsrMatrix& H, KrylovOptions opt) : H_(H), opt_(opt) {}

void KrylovPropagator::step(CVec& psi, double dt) {
  const int64_t n = H_.dim();
  const double nrm0 = psi.norm();
  if (nrm0 == 0.0) return;
  double remaining = dt;
  int guard = 0;
  while (remaining > 0.0) {
    if (++guard > 1000000) throw NumericalError("Krylov propagator made no progress");
    const int mcap = static_cast<int>(std::min<int64_t>(opt_.krylov_dim, n));
    CMat V(n, mcap);
    Vec alpha(mcap), beta(mcap);
    V.col(0) = psi / psi.norm();
    int m = 0;
    double beta_last = 0.0;
    CVec w(n);
    for (int j = 0; j < mcap; ++j) {
      H_.matvec(V.col(j).data(), w.data());
      for (int pass = 0; pass < 2; ++pass) {
        CVec c = V.leftCols(j + 1).adjoint() * w;
        w.noalias() -= V.leftCols(j + 1) * c;
        if (pass == 0) alpha(j) = c(j).real();
      }
      m = j + 1;
      const double b = w.norm();
      beta_last = b;
      if (b < 1e-14) break;
      if (j + 1 < mcap) {
        beta(j) = b;
        V.col(j + 1) = w / b;
      }
    }
    Mat T = Mat::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alpha(j);
      if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    const Vec& ev = es.eigenvalues();
    const Mat& S = es.eigenvectors();
    const bool exact = beta_last < 1e-14 || m == n;
    double tau = remaining;
    CVec c(m);
    for (int h = 0;; ++h) {
      CVec phase(m);
      for (int q = 0; q < m; ++q) phase(q) = std::exp(cplx(0.0, -ev(q) * tau)) * S(0, q);
      c = S * phase;
      const double err = exact ? 0.0 : beta_last * std::abs(c(m - 1));
      if (err <= opt_.tol) {
        max_err_ = std::max(max_err_, err);
        break;
      }
      if (h >= opt_.max_halvings)
        throw NumericalError("Krylov tolerance not reachable with dimension " +
                             std::to_string(opt_.krylov_dim));
      tau *= 0.5;
    }
    psi = nrm0 * (V.leftCols(m) * c);
    remaining -= tau;
    if (remaining < 1e-15 * std::max(1.0, dt)) remaining = 0.0;
    ++substeps_;
  }
}

SpectralPropagator::SpectralPropagator(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  E_ = es.eigenvalues();
  V_ = es.eigenvectors();
}

SpectralPropagator::SpectralPropagator(Vec energies, Mat vectors)
    : E_(std::move(energies)), V_(std::move(vectors)) {}

CVec SpectralPropagator::coefficients(const CVec& psi0) const {
  return V_.transpose().cast<cplx>() * psi0;
}

CVec SpectralPropagator::state(const CVec& coeff, double t) const {
  CVec ph(E_.size());
  for (int k = 0; k < E_.size(); ++k) ph(k) = coeff(k) * std::exp(cplx(0.0, -E_(k) * t));
  Vec re = V_ * ph.real();
  Vec im = V_ * ph.imag();
  CVec out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

CMat SpectralPropagator::states(const CVec& coeff, const std::vector<double>& times) const {
  const int64_t nt = static_cast<int64_t>(times.size());
  Mat Pr(E_.size(), nt), Pi(E_.size(), nt);
  for (int64_t j = 0; j < nt; ++j) {
    for (int k = 0; k < E_.size(); ++k) {
      cplx v = coeff(k) * std::exp(cplx(0.0, -E_(k) * times[j]));
      Pr(k, j) = v.real();
      Pi(k, j) = v.imag();
    }
  }
  Mat Re = V_ * Pr;
  Mat Im = V_ * Pi;
  CMat out(Re.rows(), Re.cols());
  out.real() = Re;
  out.imag() = Im;
  return out;
}

std::vector<CVec> evolve(const CsrMatrix& H, const CVec& psi0, double dt, int steps,
                         EvolveMethod method, EvolveLog* log, const KrylovOptions& kopt) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ModelError("initial state must be normalized");
  if (steps < 0) throw ModelError("step count must be non-negative");
  if (method == EvolveMethod::Auto) method = H.dim() <= 2048 ? EvolveMethod::Exact : EvolveMethod::Krylov;
  std::vector<CVec> traj;
  traj.reserve(static_cast<size_t>(steps) + 1);
  traj.push_back(psi0);
  const double e0 = H.expectation(psi0);
  EvolveLog lg;
  lg.steps = steps;
  auto record = [&](const CVec& psi) {
    lg.max_norm_drift = std::max(lg.max_norm_drift, std::abs(psi.norm() - 1.0));
    lg.max_energy_drift = std::max(lg.max_energy_drift, std::abs(H.expectation(psi) - e0));
  };
  if (method == EvolveMethod::Exact) {
    lg.method = "exact";
    SpectralPropagator sp(H.to_dense());
    CVec c = sp.coefficients(psi0);
    for (int s = 1; s <= steps; ++s) {
      traj.push_back(sp.state(c, s * dt));
      record(traj.back());
    }
  } else {
    lg.method = "krylov";
    KrylovPropagator kp(H, kopt);
    CVec psi = psi0;
    for (int s = 1; s <= steps; ++s) {
      kp.step(psi, dt);
      traj.push_back(psi);
      record(psi);
    }
  }
  if (log) *log = lg;
  return traj;
}

}  // namespace mcp
