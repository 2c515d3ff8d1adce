#include "mcp/csr.hpp"

#include <cmath>

namespace mcp {

void CsrMatrix::finish_row(RowEntries& row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t w = 0;
  for (size_t r = 0; r < row.size();) {
    int64_t c = row[r].first;
    double s = 0.0;
    while (r < row.size() && row[r].first == c) s += row[r++].second;
    if (s != 0.0) row[w++] = {c, s};
  }
  row.resize(w);
}

void CsrMatrix::matvec(const double* x, double* y) const {
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

void CsrMatrix::matvec_serial(const double* x, double* y) const {
  for (int64_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

void CsrMatrix::matvec(const cplx* x, cplx* y) const {
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n_; ++i) {
    cplx s = 0.0;
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

void CsrMatrix::matvec_serial(const cplx* x, cplx* y) const {
  for (int64_t i = 0; i < n_; ++i) {
    cplx s = 0.0;
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

Vec CsrMatrix::operator*(const Vec& x) const {
  Vec y(n_);
  matvec(x.data(), y.data());
  return y;
}

CVec CsrMatrix::operator*(const CVec& x) const {
  CVec y(n_);
  matvec(x.data(), y.data());
  return y;
}

Mat CsrMatrix::to_dense() const {
  Mat d = Mat::Zero(n_, n_);
  for (int64_t i = 0; i < n_; ++i)
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) d(i, col_[k]) = val_[k];
  return d;
}

double CsrMatrix::diagonal(int64_t i) const {
  for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k)
    if (col_[k] == i) return val_[k];
  return 0.0;
}

double CsrMatrix::trace() const {
  double t = 0.0;
  for (int64_t i = 0; i < n_; ++i) t += diagonal(i);
  return t;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : val_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::norm_bound() const {
  double m = 0.0;
  for (int64_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) s += std::abs(val_[k]);
    m = std::max(m, s);
  }
  return m;
}

bool CsrMatrix::is_symmetric_exact() const {
  for (int64_t i = 0; i < n_; ++i) {
    for (int64_t k = rowptr_[i]; k < rowptr_[i + 1]; ++k) {
      int64_t j = col_[k];
      auto b = col_.begin() + rowptr_[j];
      auto e = col_.begin() + rowptr_[j + 1];
      auto it = std::lower_bound(b, e, i);
      if (it == e || *it != i) return false;
      if (val_[it - col_.begin()] != val_[k]) return false;
    }
  }
  return true;
}

double CsrMatrix::expectation(const CVec& psi) const {
  CVec h = (*this) * psi;
  return psi.dot(h).real();
}

double CsrMatrix::expectation(const Vec& psi) const {
  Vec h = (*this) * psi;
  return psi.dot(h);
}

}  // namespace mcp
