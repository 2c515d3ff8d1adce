#pragma once

#include <string>
#include <vector>

#include "mcp/csr.hpp"

namespace mcp {

struct KrylovOptions {
  int krylov_dim = 30;
  double tol = 1e-10;   // local error bound per substep
  int max_halvings = 40;
};

// exp(-i H t) by short-iterative Lanczos with adaptive substeps.
class KrylovPropagator {
 public:
  KrylovPropagator(const CsrMatrix& H, KrylovOptions opt = {});
  void step(CVec& psi, double dt);
  int substeps() const { return substeps_; }
  double max_error_estimate() const { return max_err_; }

 private:
  const CsrMatrix& H_;
  KrylovOptions opt_;
  int substeps_ = 0;
  double max_err_ = 0.0;
};

// exp(-i H t) from a full eigendecomposition.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Mat& H);
  SpectralPropagator(Vec energies, Mat vectors);
  CVec coefficients(const CVec& psi0) const;
  CVec state(const CVec& coeff, double t) const;
  // Columns are states at the requested times.
  CMat states(const CVec& coeff, const std::vector<double>& times) const;
  const Vec& energies() const { return E_; }
  const Mat& vectors() const { return V_; }

 private:
  Vec E_;
  Mat V_;
};

enum class EvolveMethod { Auto, Krylov, Exact };

struct EvolveLog {
  std::string method;
  int steps = 0;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
};

// Trajectory psi(t_n), n = 0..steps, t_n = n*dt.
std::vector<CVec> evolve(const CsrMatrix& H, const CVec& psi0, double dt, int steps,
                         EvolveMethod method = EvolveMethod::Auto, EvolveLog* log = nullptr,
                         const KrylovOptions& kopt = {});

}  // namespace mcp
