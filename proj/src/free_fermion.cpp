#include "mcp/free_fermion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

namespace mcp::ff {

namespace {

// K X_p X_q for p < q with no occupied JW string between them in the form's ordering.
void add_bond(Mat& A, Mat& B, int p, int q, double K) {
  A(p, q) += K;
  A(q, p) += K;
  B(p, q) -= K;
  B(q, p) += K;
}

}  // namespace

QuadraticForm build_segment_form(const ModelParams& p, const spin::ChainSegment& seg) {
  const int L = static_cast<int>(seg.cells.size());
  if (L == 0) throw ModelError("empty segment has no quadratic form");
  const int n = L + 2;
  QuadraticForm qf;
  qf.A = Mat::Zero(n, n);
  qf.B = Mat::Zero(n, n);
  qf.cell.assign(n, -1);
  qf.kind.assign(n, SiteKind::Physical);
  qf.gauge.assign(n, 1);
  qf.kind[0] = SiteKind::AuxLeft;
  qf.kind[n - 1] = SiteKind::AuxRight;
  for (int k = 0; k < L; ++k) {
    qf.cell[k + 1] = seg.cells[k];
    qf.gauge[k + 1] = (k % 2 == 0) ? 1 : -1;
    qf.A(k + 1, k + 1) = 2.0 * p.J;
  }
  const double q = p.d / 4.0;
  add_bond(qf.A, qf.B, 0, 1, qf.gauge[0] * qf.gauge[1] * seg.h_left);
  for (int k = 1; k < L; ++k) add_bond(qf.A, qf.B, k, k + 1, -q * qf.gauge[k] * qf.gauge[k + 1]);
  add_bond(qf.A, qf.B, L, L + 1, qf.gauge[L] * qf.gauge[L + 1] * seg.h_right);
  return qf;
}

std::vector<QuadraticForm> build_extended_chain(const ModelParams& p,
                                                const std::vector<std::pair<int, spin::Pole>>& monopoles) {
  if (p.boundary != Boundary::Periodic) throw ModelError("free-fermion solver needs the periodic geometry");
  if (monopoles.empty()) throw ModelError("extended chain needs at least one monopole");
  const auto ch = spin::fixed_monopole_chain(p, monopoles);
  std::vector<QuadraticForm> out;
  for (const auto& s : ch.segments)
    if (!s.cells.empty()) out.push_back(build_segment_form(p, s));
  return out;
}

QuadraticForm build_ring_form(const ModelParams& p, bool antiperiodic) {
  const int n = p.M;
  QuadraticForm qf;
  qf.periodic = true;
  qf.A = Mat::Zero(n, n);
  qf.B = Mat::Zero(n, n);
  qf.cell.resize(n);
  qf.kind.assign(n, SiteKind::Physical);
  qf.gauge.assign(n, 1);
  const double q = p.d / 4.0;
  for (int k = 0; k < n; ++k) {
    qf.cell[k] = k;
    qf.A(k, k) = 2.0 * p.J;
  }
  for (int k = 0; k + 1 < n; ++k) add_bond(qf.A, qf.B, k, k + 1, -q);
  // wrap bond X_{n-1} X_0 = -P (c_{n-1} + c_{n-1}^dag)(c_0 - c_0^dag)
  const double kw = antiperiodic ? q : -q;
  qf.A(n - 1, 0) += kw;
  qf.A(0, n - 1) += kw;
  qf.B(n - 1, 0) -= kw;
  qf.B(0, n - 1) += kw;
  return qf;
}

double pfaffian(Mat A) {
  const int n = static_cast<int>(A.rows());
  if (n % 2) return 0.0;
  double pf = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    int kp = k + 1;
    double best = std::abs(A(k + 1, k));
    for (int i = k + 2; i < n; ++i)
      if (std::abs(A(i, k)) > best) {
        best = std::abs(A(i, k));
        kp = i;
      }
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      pf = -pf;
    }
    if (A(k + 1, k) == 0.0) return 0.0;
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const int r = n - k - 2;
      Vec tau = A.row(k).tail(r).transpose() / A(k, k + 1);
      Vec col = A.col(k + 1).tail(r);
      A.bottomRightCorner(r, r) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

BogoliubovSpectrum diagonalize_bdg(const QuadraticForm& qf) {
  const int n = static_cast<int>(qf.A.rows());
  const Mat Ap = qf.A + qf.B, Am = qf.A - qf.B;
  std::vector<int> zphi, zpsi, rp, rq;
  for (int j = 0; j < n; ++j) {
    (Ap.col(j).cwiseAbs().maxCoeff() == 0.0 ? zphi : rp).push_back(j);
    (Am.col(j).cwiseAbs().maxCoeff() == 0.0 ? zpsi : rq).push_back(j);
  }
  if (zphi.size() != zpsi.size())
    throw NumericalError("unpaired structural zero modes: " + std::to_string(zphi.size()) + " vs " +
                         std::to_string(zpsi.size()));
  struct Mode {
    double e;
    Vec phi, psi;
  };
  std::vector<Mode> modes;
  for (size_t k = 0; k < zphi.size(); ++k)
    modes.push_back({0.0, Vec::Unit(n, zphi[k]), Vec::Unit(n, zpsi[k])});

  const int r = static_cast<int>(rp.size());
  BogoliubovSpectrum sp;
  sp.structural_zero_modes = static_cast<int>(zphi.size());
  if (r > 0) {
    const Mat C = Am * Ap, D = Ap * Am;
    Mat Cr(r, r), Dr(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        Cr(i, j) = C(rp[i], rp[j]);
        Dr(i, j) = D(rq[i], rq[j]);
      }
    Cr = 0.5 * (Cr + Cr.transpose()).eval();
    Dr = 0.5 * (Dr + Dr.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> ec(Cr), ed(Dr);
    const double cnorm = std::max(ec.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    sp.threshold = 1e-8 * cnorm;
    auto embed = [&](const Vec& v, const std::vector<int>& idx) {
      Vec out = Vec::Zero(n);
      for (int i = 0; i < r; ++i) out(idx[i]) = v(i);
      return out;
    };
    std::vector<int> zc, zd;
    for (int k = 0; k < r; ++k) {
      if (ec.eigenvalues()(k) <= sp.threshold) zc.push_back(k);
      if (ed.eigenvalues()(k) <= sp.threshold) zd.push_back(k);
    }
    if (zc.size() != zd.size())
      throw NumericalError("ill-conditioned zero modes: C has " + std::to_string(zc.size()) + ", D has " +
                           std::to_string(zd.size()) + " below threshold");
    sp.zero_gap = static_cast<int>(zc.size()) < r ? ec.eigenvalues()(static_cast<int>(zc.size())) / sp.threshold : 0.0;
    for (int k = static_cast<int>(zc.size()); k < r; ++k) {
      Vec phi = embed(ec.eigenvectors().col(k), rp);
      Vec w = Ap * phi;
      const double e = w.norm();
      modes.push_back({e, phi, w / e});
    }
    if (!zc.empty()) {
      const int z = static_cast<int>(zc.size());
      Mat P0(n, z), S0(n, z);
      for (int k = 0; k < z; ++k) {
        P0.col(k) = embed(ec.eigenvectors().col(zc[k]), rp);
        S0.col(k) = embed(ed.eigenvectors().col(zd[k]), rq);
      }
      Mat Mz = S0.transpose() * Ap * P0;
      Eigen::JacobiSVD<Mat> svd(Mz, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Mat Pz = P0 * svd.matrixV(), Sz = S0 * svd.matrixU();
      for (int k = 0; k < z; ++k) modes.push_back({svd.singularValues()(k), Pz.col(k), Sz.col(k)});
    }
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.e < b.e; });
  sp.eps.resize(n);
  sp.phi.resize(n, n);
  sp.psi.resize(n, n);
  const double zcut = std::sqrt(sp.threshold);
  for (int k = 0; k < n; ++k) {
    sp.eps(k) = modes[k].e;
    sp.phi.col(k) = modes[k].phi;
    sp.psi.col(k) = modes[k].psi;
    if (modes[k].e <= zcut) sp.zero_modes.push_back(k);
  }
  return sp;
}

double bdg_vacuum_energy(const QuadraticForm& qf, const BogoliubovSpectrum& sp) {
  return 0.5 * (qf.A.trace() - sp.eps.sum());
}

namespace {

struct Maj {
  bool b;  // false: a = c + c^dag, true: b = i (c^dag - c)
  int site;
};

// Pf of R where <gamma_1 ... gamma_2m> = i^m Pf(R) on the Bogoliubov vacuum.
double majorana_pf(const BogoliubovSpectrum& sp, const std::vector<Maj>& ops) {
  const Mat G = sp.psi * sp.phi.transpose();  // <b_i a_j> = -i G_ij
  const int m = static_cast<int>(ops.size());
  Mat R = Mat::Zero(m, m);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) {
      double x = 0.0;
      if (!ops[u].b && ops[v].b) x = G(ops[v].site, ops[u].site);
      if (ops[u].b && !ops[v].b) x = -G(ops[u].site, ops[v].site);
      R(u, v) = x;
      R(v, u) = -x;
    }
  return pfaffian(R);
}

int to_sign(std::complex<double> z, const char* what) {
  if (std::abs(z.imag()) > 1e-6 || std::abs(std::abs(z.real()) - 1.0) > 1e-6)
    throw NumericalError(std::string("non-unit ") + what);
  return z.real() > 0 ? 1 : -1;
}

}  // namespace

int bdg_vacuum_parity(const BogoliubovSpectrum& sp) {
  const int n = static_cast<int>(sp.eps.size());
  std::vector<Maj> ops;
  for (int l = 0; l < n; ++l) {
    ops.push_back({false, l});
    ops.push_back({true, l});
  }
  // prod (-i a_l b_l) = (-i)^n <a0 b0 a1 b1 ...> = (-i)^n i^n Pf
  return to_sign(majorana_pf(sp, ops), "vacuum parity");
}

int aux_product_on_vacuum(const BogoliubovSpectrum& sp) {
  const int n = static_cast<int>(sp.eps.size());
  // X_0 X_{n-1} = (-i)^(n-2) i  a_0 (a_1 b_1) ... (a_{n-2} b_{n-2}) b_{n-1}
  std::vector<Maj> ops{{false, 0}};
  for (int l = 1; l <= n - 2; ++l) {
    ops.push_back({false, l});
    ops.push_back({true, l});
  }
  ops.push_back({true, n - 1});
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> pre = std::pow(-I, n - 2) * I * std::pow(I, n - 1);
  return to_sign(pre * majorana_pf(sp, ops), "auxiliary product");
}

int edge_occupation(const QuadraticForm& qf, const BogoliubovSpectrum& sp) {
  if (qf.periodic) return 0;
  // both auxiliary spins decoupled: every auxiliary sector is free
  if (sp.structural_zero_modes >= 2) return 0;
  return aux_product_on_vacuum(sp) == 1 ? 0 : 1;
}

namespace {

int first_active_mode(const BogoliubovSpectrum& sp) { return sp.structural_zero_modes; }

}  // namespace

double segment_ground_energy(const QuadraticForm& qf, const BogoliubovSpectrum& sp) {
  const double e0 = bdg_vacuum_energy(qf, sp);
  return e0 + edge_occupation(qf, sp) * sp.eps(first_active_mode(sp));
}

double vacuum_ring_energy(const ModelParams& p) {
  if (p.boundary != Boundary::Periodic) throw ModelError("vacuum ring needs the periodic geometry");
  double best = 0.0;
  bool have = false;
  for (int sector = 0; sector < 2; ++sector) {
    const bool even = sector == 0;
    const auto qf = build_ring_form(p, even);
    const auto sp = diagonalize_bdg(qf);
    double e = bdg_vacuum_energy(qf, sp);
    const int par = bdg_vacuum_parity(sp);
    if ((par == 1) != even) e += sp.eps(0);
    if (!have || e < best) best = e;
    have = true;
  }
  return best;
}

Vec mode_sum_density(const QuadraticForm& qf, const BogoliubovSpectrum& sp) {
  const int n = static_cast<int>(sp.eps.size());
  const int edge = first_active_mode(sp);
  const int occ = edge_occupation(qf, sp);
  std::vector<int> rows;
  for (int i = 0; i < n; ++i)
    if (qf.kind[i] == SiteKind::Physical) rows.push_back(i);
  Vec out(rows.size());
  for (size_t t = 0; t < rows.size(); ++t) {
    const int i = rows[t];
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double w = (k == edge && occ) ? -1.0 : 1.0;
      s += w * sp.phi(i, k) * sp.psi(i, k);
    }
    out(t) = 0.5 * (1.0 - s);
  }
  return out;
}

namespace {

// Fermion operators on the explicit 2^n basis with strings to the right.
void apply_c(const Vec& v, int j, int n, bool dag, double coef, Vec& out) {
  const std::uint64_t N = std::uint64_t{1} << n, bit = std::uint64_t{1} << j;
  for (std::uint64_t b = 0; b < N; ++b) {
    if (b & bit) continue;
    const double sg = (std::popcount(b >> (j + 1)) & 1) ? -1.0 : 1.0;
    if (dag)
      out(b | bit) += coef * sg * v(b);
    else
      out(b) += coef * sg * v(b | bit);
  }
}

Vec apply_eta(const BogoliubovSpectrum& sp, int k, const Vec& v, bool dag) {
  const int n = static_cast<int>(sp.eps.size());
  Vec out = Vec::Zero(v.size());
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (sp.phi(i, k) + sp.psi(i, k));
    const double w = 0.5 * (sp.phi(i, k) - sp.psi(i, k));
    // eta = sum u c + w c^dag ; eta^dag = sum u c^dag + w c
    if (u != 0.0) apply_c(v, i, n, dag, u, out);
    if (w != 0.0) apply_c(v, i, n, !dag, w, out);
  }
  return out;
}

Vec bogoliubov_vacuum(const BogoliubovSpectrum& sp) {
  const int n = static_cast<int>(sp.eps.size());
  const std::uint64_t N = std::uint64_t{1} << n;
  for (std::uint64_t ref = 0; ref < N; ++ref) {
    Vec v = Vec::Zero(static_cast<int64_t>(N));
    v(ref) = 1.0;
    for (int k = 0; k < n; ++k) v = apply_eta(sp, k, v, false);
    const double nv = v.norm();
    if (nv > 1e-6) return v / nv;
  }
  throw NumericalError("could not construct the Bogoliubov vacuum");
}

}  // namespace

McPWavefunction mcp_state(const QuadraticForm& qf, const BogoliubovSpectrum& sp, const ModelParams& p,
                          int max_cells) {
  const int n = static_cast<int>(qf.A.rows());
  if (qf.periodic) throw ModelError("reconstruction is defined for extended chains");
  const int L = n - 2;
  if (L > max_cells) throw ModelError("segment exceeds the reconstruction cap");
  const Vec omega = bogoliubov_vacuum(sp);
  const int z = 0, edge = first_active_mode(sp);
  Vec best;
  double best_norm = -1.0;
  for (int occ = 0; occ < 2; ++occ) {
    Vec base = occ ? apply_eta(sp, edge, omega, true) : omega;
    const Vec raised = apply_eta(sp, z, base, true);
    for (int sg = -1; sg <= 1; sg += 2) {
      Vec cand = base + sg * raised;
      const double cn = cand.norm();
      if (cn < 1e-12) continue;
      cand /= cn;
      Vec w = Vec::Zero(int64_t{1} << L);
      const std::uint64_t mask = (std::uint64_t{1} << L) - 1;
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) w((b >> 1) & mask) += 0.5 * cand(b);
      const double pn = w.norm();
      if (pn > best_norm) {
        best_norm = pn;
        best = w;
      }
    }
  }
  if (best_norm < 1e-12) throw NumericalError("auxiliary-sector projection vanished");
  McPWavefunction out;
  out.M = p.M;
  out.projection_norm = best_norm;
  for (int k = 0; k < L; ++k) out.cells.push_back(qf.cell[k + 1]);
  std::uint64_t gmask = 0;
  for (int k = 0; k < L; ++k)
    if (qf.gauge[k + 1] < 0) gmask |= std::uint64_t{1} << k;
  for (int64_t b = 0; b < best.size(); ++b)
    if (std::popcount(static_cast<std::uint64_t>(b) & gmask) & 1) best(b) = -best(b);
  best /= best.norm();
  if (best(0) < 0) best = -best;
  out.amplitudes = best;
  return out;
}

McPWavefunction mcp_state(const ModelParams& p, const std::vector<std::pair<int, spin::Pole>>& monopoles,
                          int max_cells) {
  const auto forms = build_extended_chain(p, monopoles);
  McPWavefunction out;
  out.M = p.M;
  out.monopoles = monopoles;
  std::sort(out.monopoles.begin(), out.monopoles.end());
  out.amplitudes = Vec::Ones(1);
  out.projection_norm = 1.0;
  int total = 0;
  for (const auto& qf : forms) total += static_cast<int>(qf.A.rows()) - 2;
  if (total > max_cells) throw ModelError("state exceeds the reconstruction cap");
  for (const auto& qf : forms) {
    const auto sp = diagonalize_bdg(qf);
    const auto seg = mcp_state(qf, sp, p, max_cells);
    // tensor product: new cells appended as higher bits
    const int64_t na = out.amplitudes.size(), nb = seg.amplitudes.size();
    Vec prod(na * nb);
    for (int64_t j = 0; j < nb; ++j) prod.segment(j * na, na) = seg.amplitudes(j) * out.amplitudes;
    out.amplitudes = prod;
    out.cells.insert(out.cells.end(), seg.cells.begin(), seg.cells.end());
    out.projection_norm = std::min(out.projection_norm, seg.projection_norm);
  }
  return out;
}

Vec wavefunction_density(const McPWavefunction& w) {
  Vec n = Vec::Zero(w.M);
  for (int64_t b = 0; b < w.amplitudes.size(); ++b) {
    const double pr = w.amplitudes(b) * w.amplitudes(b);
    for (size_t k = 0; k < w.cells.size(); ++k)
      if ((b >> k) & 1) n(w.cells[k]) += pr;
  }
  return n;
}

Vec magnon_density(const ModelParams& p, const std::vector<std::pair<int, spin::Pole>>& monopoles) {
  Vec n = Vec::Zero(p.M);
  for (const auto& qf : build_extended_chain(p, monopoles)) {
    const auto sp = diagonalize_bdg(qf);
    const Vec d = mode_sum_density(qf, sp);
    int t = 0;
    for (size_t i = 0; i < qf.kind.size(); ++i)
      if (qf.kind[i] == SiteKind::Physical) n(qf.cell[i]) = d(t++);
  }
  return n;
}

FixedMonopoleEnergy fixed_monopole_energy(const ModelParams& p,
                                          const std::vector<std::pair<int, spin::Pole>>& monopoles) {
  FixedMonopoleEnergy r;
  const auto ch = spin::fixed_monopole_chain(p, monopoles);
  r.constant = ch.constant;
  r.vacuum = vacuum_ring_energy(p);
  r.energy = ch.constant;
  if (monopoles.empty()) {
    r.energy = r.vacuum;
  } else {
    for (const auto& qf : build_extended_chain(p, monopoles)) {
      const auto sp = diagonalize_bdg(qf);
      const double e = segment_ground_energy(qf, sp);
      r.segments.push_back(e);
      r.energy += e;
    }
  }
  r.relative = r.energy - r.vacuum;
  return r;
}

}  // namespace mcp::ff
