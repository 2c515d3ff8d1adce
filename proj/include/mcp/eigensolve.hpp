#pragma once

#include <string>

#include "mcp/csr.hpp"

namespace mcp {

struct EigenOptions {
  int dense_cutoff = 4096;   // dense solver at or below this dimension
  int max_basis = 0;         // Lanczos subspace size, 0 = automatic
  int max_restarts = 200;
  double tol = 1e-10;        // residual target for iterative pairs
};

struct EigenResult {
  Vec values;    // ascending
  Mat vectors;   // columns
  std::string method;
  int matvecs = 0;
  double max_residual = 0.0;
};

// Lowest k eigenpairs of a real symmetric matrix.
EigenResult lowest_eigenpairs(const CsrMatrix& H, int k, const EigenOptions& opt = {});
EigenResult dense_eigenpairs(const Mat& H, int k = -1);
// Thick-restart Lanczos with full reorthogonalization; deterministic start vector.
EigenResult lanczos_lowest(const CsrMatrix& H, int k, const EigenOptions& opt = {});

double max_residual(const CsrMatrix& H, const EigenResult& r);

}  // namespace mcp
