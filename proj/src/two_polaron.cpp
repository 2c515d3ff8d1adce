#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcp/eigensolve.hpp"
#include "mcp/free_fermion.hpp"
#include "mcp/polaron.hpp"
#include "mcp/spin_map.hpp"

namespace mcp::polaron {

namespace {

using spin::Pole;

double pair_energy(const ModelParams& p, int r) {
  const int rn = ((r % p.M) + p.M) % p.M;
  return ff::fixed_monopole_energy(p, {{0, Pole::South}, {rn, Pole::North}}).energy;
}

double diagonal_of(const ModelParams& p, const spin::MagnonMonopoleConfig& c) {
  return spin::heff_diagonal(p, spin::pack(c, p.M));
}

}  // namespace

double pseudobarrier(const BarrierGaps& g) {
  const double s = 1.0 / g.E_v - 2.0 / g.E_m + 1.0 / g.E_mm;
  if (!std::isfinite(s) || std::abs(s) < 1e-10) throw NumericalError("divergent pseudobarrier");
  return 1.0 / s;
}

TwoPolaronModel build_two_polaron_model(const ModelParams& p, int r_max) {
  validate(p);
  if (p.boundary != Boundary::Periodic) throw ModelError("two-polaron model is defined on the ring");
  if (p.M % 2 == 0) throw ModelError("two-polaron model needs odd M");
  if (r_max < 1 || r_max > (p.M - 1) / 2) throw ModelError("r_max must lie in [1, (M-1)/2]");
  TwoPolaronModel m;
  m.params = p;
  m.r_max = r_max;
  m.J_McP = build_mcp_model(p).J_McP;
  m.reference = pair_energy(p, (p.M - 1) / 2);
  for (int r = 1; r <= r_max; ++r) {
    m.V[r] = pair_energy(p, r) - m.reference;
    m.V[-r] = pair_energy(p, -r) - m.reference;
  }

  // Contact pair S(0) N(1) and the states it visits through pair annihilation.
  spin::MagnonMonopoleConfig contact;
  contact.monopoles = {{0, Pole::South}, {1, Pole::North}};
  spin::MagnonMonopoleConfig vac, one, two;
  one.magnons = 1;
  two.magnons = 3;
  const double e1 = diagonal_of(p, contact);
  m.gaps.E_v = diagonal_of(p, vac) - e1;
  m.gaps.E_m = diagonal_of(p, one) - e1;
  m.gaps.E_mm = diagonal_of(p, two) - e1;
  m.V[0] = pseudobarrier(m.gaps);
  return m;
}

Mat relative_hamiltonian(const TwoPolaronModel& m, double K) {
  const int n = 2 * m.r_max + 1;
  Mat H = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) H(a, a) = m.V.at(a - m.r_max);
  const double t = -2.0 * m.J_McP * std::cos(K / 2.0);
  for (int a = 0; a + 1 < n; ++a) H(a, a + 1) = H(a + 1, a) = t;
  if (2 * m.r_max + 1 == m.params.M && n > 2) {
    // relative coordinate closes on the ring
    const double w = t * std::cos(K * m.params.M / 2.0);
    H(0, n - 1) += w;
    H(n - 1, 0) += w;
  }
  return H;
}

BipolaronSpectrum bipolaron_spectrum(const TwoPolaronModel& m, const std::vector<double>& K) {
  BipolaronSpectrum s;
  for (double k : K) {
    BipolaronBlock b;
    b.K = k;
    const auto r = dense_eigenpairs(relative_hamiltonian(m, k));
    b.energies = r.values;
    b.states = r.vectors;
    b.continuum_edge = -4.0 * std::abs(m.J_McP * std::cos(k / 2.0));
    const int n = static_cast<int>(b.energies.size());
    for (int i = 0; i < n; ++i) {
      if (!(b.energies(i) < b.continuum_edge - 1e-12)) break;
      ++b.n_bound;
      const Vec v = b.states.col(i);
      b.parity.push_back(v.dot(v.reverse()));
    }
    b.n_branches = (b.n_bound + 1) / 2;
    s.blocks.push_back(std::move(b));
  }
  return s;
}

std::vector<double> center_of_mass_grid(int M) {
  std::vector<double> K;
  for (int n = 0; n < M; ++n) {
    double k = 2.0 * std::numbers::pi * n / M;
    if (k > std::numbers::pi + 1e-12) k -= 2.0 * std::numbers::pi;
    K.push_back(k);
  }
  return K;
}

std::vector<double> exact_pair_levels(const ModelParams& p, int count) {
  validate(p);
  if (p.M % 2 == 0) throw ModelError("pair levels need odd M");
  const auto em = spin::build_heff(p, spin::enumerate_fermion_sector(p.M, p.M));
  const int64_t n = static_cast<int64_t>(em.basis.size());
  std::vector<int64_t> shift(static_cast<size_t>(n));
  std::vector<char> two(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const spin::Packed c = em.basis[static_cast<size_t>(i)];
    spin::Packed t = 0;
    for (int x = 0; x < p.M; ++x) t = spin::with_code(t, (x + 1) % p.M, spin::code_at(c, x));
    shift[static_cast<size_t>(i)] = em.index(t);
    two[static_cast<size_t>(i)] =
        spin::count_code(c, p.M, spin::kNorth) + spin::count_code(c, p.M, spin::kSouth) == 2;
  }
  const double ref = pair_energy(p, (p.M - 1) / 2);
  EigenOptions opt;
  opt.dense_cutoff = 0;
  const auto r = lowest_eigenpairs(em.H, std::min<int64_t>(n, 8 * count + 8), opt);
  std::vector<double> out;
  for (int k = 0; k < static_cast<int>(r.values.size()) && static_cast<int>(out.size()) < count; ++k) {
    const Vec v = r.vectors.col(k);
    double w2 = 0.0, tr = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      if (two[static_cast<size_t>(i)]) w2 += v(i) * v(i);
      tr += v(shift[static_cast<size_t>(i)]) * v(i);
    }
    if (w2 > 0.5 && tr > 1.0 - 1e-6) out.push_back(r.values(k) - ref);
  }
  if (static_cast<int>(out.size()) < count) throw NumericalError("too few zero-momentum pair levels");
  return out;
}

}  // namespace mcp::polaron
