#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace mcp {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Real sparse matrix in compressed-row form. Immutable after construction.
class CsrMatrix {
 public:
  using RowEntries = std::vector<std::pair<int64_t, double>>;

  CsrMatrix() = default;

  // fn(row, out) appends (col, value) pairs for one row; duplicates are summed,
  // exact zeros after summation are dropped. Rows are generated in parallel
  // when `parallel` is set; the result does not depend on the thread count.
  template <class RowFn>
  static CsrMatrix build(int64_t n, RowFn&& fn, bool parallel = true);

  int64_t dim() const { return n_; }
  int64_t nnz() const { return static_cast<int64_t>(col_.size()); }
  const std::vector<int64_t>& row_ptr() const { return rowptr_; }
  const std::vector<int64_t>& col_index() const { return col_; }
  const std::vector<double>& values() const { return val_; }

  void matvec(const double* x, double* y) const;
  void matvec_serial(const double* x, double* y) const;
  void matvec(const cplx* x, cplx* y) const;
  void matvec_serial(const cplx* x, cplx* y) const;

  Vec operator*(const Vec& x) const;
  CVec operator*(const CVec& x) const;

  Mat to_dense() const;
  double diagonal(int64_t i) const;
  double trace() const;
  double max_abs() const;
  // Gershgorin bound on the spectral radius.
  double norm_bound() const;
  bool is_symmetric_exact() const;
  double expectation(const CVec& psi) const;
  double expectation(const Vec& psi) const;

 private:
  static void finish_row(RowEntries& row);

  int64_t n_ = 0;
  std::vector<int64_t> rowptr_{0};
  std::vector<int64_t> col_;
  std::vector<double> val_;
};

template <class RowFn>
CsrMatrix CsrMatrix::build(int64_t n, RowFn&& fn, bool parallel) {
  std::vector<RowEntries> rows(static_cast<size_t>(n));
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int64_t i = 0; i < n; ++i) {
      fn(i, rows[i]);
      finish_row(rows[i]);
    }
  } else {
    for (int64_t i = 0; i < n; ++i) {
      fn(i, rows[i]);
      finish_row(rows[i]);
    }
  }
  CsrMatrix m;
  m.n_ = n;
  m.rowptr_.assign(static_cast<size_t>(n) + 1, 0);
  for (int64_t i = 0; i < n; ++i) m.rowptr_[i + 1] = m.rowptr_[i] + static_cast<int64_t>(rows[i].size());
  m.col_.resize(m.rowptr_[n]);
  m.val_.resize(m.rowptr_[n]);
  for (int64_t i = 0; i < n; ++i) {
    int64_t k = m.rowptr_[i];
    for (auto& [c, v] : rows[i]) {
      m.col_[k] = c;
      m.val_[k] = v;
      ++k;
    }
    RowEntries().swap(rows[i]);
  }
  return m;
}

}  // namespace mcp
