#include "mcp/polaron.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "mcp/free_fermion.hpp"
#include "mcp/spin_map.hpp"

namespace mcp::polaron {

namespace {

// Ring magnon mask of each amplitude index.
std::vector<std::uint64_t> ring_masks(const ff::McPWavefunction& w) {
  std::vector<std::uint64_t> out(static_cast<size_t>(w.amplitudes.size()));
  for (size_t b = 0; b < out.size(); ++b) {
    std::uint64_t m = 0;
    for (size_t k = 0; k < w.cells.size(); ++k)
      if ((b >> k) & 1) m |= std::uint64_t{1} << w.cells[k];
    out[b] = m;
  }
  return out;
}

}  // namespace

McPModel build_mcp_model(const ModelParams& p) {
  validate(p);
  if (p.boundary != Boundary::Periodic) throw ModelError("McP model is defined on the ring");
  if (p.M < 3) throw ModelError("McP model needs M >= 3");
  McPModel m;
  m.d = p.d;
  m.M = p.M;
  const std::vector<std::pair<int, spin::Pole>> at0{{0, spin::Pole::South}};
  const auto e = ff::fixed_monopole_energy(p, at0);
  m.bare_constant = e.constant;
  m.vacuum = e.vacuum;
  m.E_B = e.relative - e.constant;

  const auto w0 = ff::mcp_state(p, at0);
  m.projection_norm = w0.projection_norm;
  if (w0.projection_norm < 1e-8) throw NumericalError("McP projection below numerical floor");

  // The state with the monopole on cell 1 is the translate of w0.
  const auto from = ring_masks(w0);
  std::unordered_map<std::uint64_t, double> shifted;
  const std::uint64_t full = (std::uint64_t{1} << p.M) - 1;
  for (size_t b = 0; b < from.size(); ++b) {
    const std::uint64_t m1 = ((from[b] << 1) | (from[b] >> (p.M - 1))) & full;
    shifted[m1] = w0.amplitudes(static_cast<int64_t>(b));
  }

  // Bond (0, 1): S on cell 0 with spin x on cell 1 -> spin y on cell 0 with S on cell 1.
  for (size_t b = 0; b < from.size(); ++b) {
    const double a0 = w0.amplitudes(static_cast<int64_t>(b));
    if (a0 == 0.0) continue;
    const int x = static_cast<int>((from[b] >> 1) & 1);
    for (const auto& t : spin::bond_transitions(spin::kSouth, x ? spin::kMagnon : spin::kVac, p.J1)) {
      if (t.cb != spin::kSouth) continue;
      const int y = t.ca == spin::kMagnon ? 1 : 0;
      std::uint64_t m1 = from[b] & ~std::uint64_t{2};
      if (y) m1 |= 1;
      const auto it = shifted.find(m1);
      if (it == shifted.end()) continue;
      // (x, y): (0,0) bare, (0,1) creating, (1,0) absorbing, (1,1) both
      m.channels[static_cast<size_t>(2 * x + y)] += -t.amp * a0 * it->second;
    }
  }
  m.J_McP = m.channels[0] + m.channels[1] + m.channels[2] + m.channels[3];
  return m;
}

Dispersion dispersion(const McPModel& m, double J1, const std::vector<double>& k) {
  Dispersion d;
  d.k = k;
  for (double q : k) {
    d.mcp.push_back(m.E_B - 2.0 * m.J_McP * std::cos(q));
    d.bare.push_back(-J1 * std::cos(q));
  }
  d.mcp_bandwidth = 4.0 * std::abs(m.J_McP);
  d.bare_bandwidth = 2.0 * std::abs(J1);
  return d;
}

std::vector<double> uniform_k_grid(int n) {
  if (n < 1) throw ModelError("k grid needs at least one point");
  std::vector<double> k;
  if (n == 1) return {0.0};
  // both zone edges included so the grid is mirror symmetric
  for (int i = 0; i < n; ++i) k.push_back(std::numbers::pi * (2.0 * i - (n - 1)) / (n - 1));
  return k;
}

TiltPotential tilt_to_mcp_potential(double g1, double g2, int M) {
  if (M < 1) throw ModelError("tilt potential needs M >= 1");
  TiltPotential t;
  t.g1 = g1;
  t.g2 = g2;
  for (int j = 1; j <= M; ++j) t.v.push_back(-2.0 * (g1 - g2) * j - 4.0 * g2 * j * j);
  return t;
}

Mat effective_mcp_hamiltonian(double J_McP, const std::vector<double>& onsite, double twist) {
  const int M = static_cast<int>(onsite.size());
  Mat H = Mat::Zero(M, M);
  for (int j = 0; j < M; ++j) H(j, j) = onsite[static_cast<size_t>(j)];
  for (int j = 0; j + 1 < M; ++j) H(j, j + 1) = H(j + 1, j) = -J_McP;
  if (M > 2) {
    H(0, M - 1) += -J_McP * twist;
    H(M - 1, 0) += -J_McP * twist;
  }
  return H;
}

double single_monopole_twist(int M) {
  // M - 1 fermions; the wrap hop passes the other M - 2
  return (M - 2) % 2 ? -1.0 : 1.0;
}

}  // namespace mcp::polaron
