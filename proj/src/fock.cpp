#include "mcp/fock.hpp"

#include <algorithm>
#include <bit>

namespace mcp::fock {

SectorBasis::SectorBasis(int M, int N) : M_(M), N_(N) {
  if (M < 1 || 2 * M > 62) throw ModelError("cell count out of range for bitmask basis");
  if (N < 0 || N > 2 * M) throw ModelError("particle number out of range");
  const int L = 2 * M;
  if (N == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack enumerates N-subsets in ascending order.
  Bits s = (Bits{1} << N) - 1;
  const Bits limit = Bits{1} << L;
  while (s < limit) {
    states_.push_back(s);
    Bits c = s & (~s + 1);
    Bits r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

int64_t SectorBasis::index(Bits b) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), b);
  if (it == states_.end() || *it != b) return -1;
  return it - states_.begin();
}

SectorBasis build_sector_basis(int M, int N) { return SectorBasis(M, N); }

int hop_sign(Bits bits, int from, int to) {
  int lo = std::min(from, to), hi = std::max(from, to);
  Bits mask = hi - lo > 1 ? (((Bits{1} << (hi - lo - 1)) - 1) << (lo + 1)) : 0;
  return (std::popcount(bits & mask) & 1) ? -1 : 1;
}

std::vector<double> tilt_profile(const ModelParams& p) {
  std::vector<double> t(2 * p.M);
  for (int s = 0; s < 2 * p.M; ++s) {
    double i = s + 1;
    t[s] = p.g1 * i + p.g2 * i * i;
  }
  return t;
}

CsrMatrix build_hfh(const ModelParams& p, const SectorBasis& basis, const std::vector<double>* tilt,
                    const BuildOptions& opt) {
  if (p.M != basis.cells()) throw ModelError("basis built for a different cell count");
  if (p.M < 2) throw ModelError("at least two cells required");
  if (basis.size() > opt.max_dim) throw ModelError("sector dimension exceeds configured cap");
  if (tilt && static_cast<int>(tilt->size()) != 2 * p.M) throw ModelError("tilt profile has wrong length");
  const int L = 2 * p.M;
  struct Bond {
    int a, b;
    double t;
  };
  std::vector<Bond> hops;
  for (int c = 0; c < p.M; ++c) hops.push_back({2 * c, 2 * c + 1, -p.J});
  for (int c = 0; c + 1 < p.M; ++c) hops.push_back({2 * c + 1, 2 * c + 2, -p.J1});
  if (p.boundary == Boundary::Periodic) hops.push_back({L - 1, 0, -p.J1});
  const double vin = 1.5 * p.d, vout = p.d;

  auto row = [&](int64_t i, CsrMatrix::RowEntries& out) {
    const Bits s = basis.state(i);
    auto occ = [&](int k) { return static_cast<int>((s >> k) & 1); };
    double diag = 0.0;
    for (int c = 0; c < p.M; ++c) diag += vin * occ(2 * c) * occ(2 * c + 1);
    for (int c = 0; c + 1 < p.M; ++c) diag += vout * occ(2 * c + 1) * occ(2 * c + 2);
    if (p.boundary == Boundary::Periodic && p.M > 1) diag += vout * occ(L - 1) * occ(0);
    if (tilt)
      for (int k = 0; k < L; ++k) diag += (*tilt)[k] * occ(k);
    out.push_back({i, diag});
    for (const auto& h : hops) {
      for (int dir = 0; dir < 2; ++dir) {
        const int from = dir ? h.b : h.a, to = dir ? h.a : h.b;
        if (!occ(from) || occ(to)) continue;
        Bits t = (s ^ (Bits{1} << from)) | (Bits{1} << to);
        int64_t j = basis.index(t);
        out.push_back({j, h.t * hop_sign(s, from, to)});
      }
    }
  };
  return CsrMatrix::build(basis.size(), row, opt.parallel);
}

EigenResult ground_state(const CsrMatrix& H, int k, const EigenOptions& opt) {
  return lowest_eigenpairs(H, k, opt);
}

Vec site_densities(const SectorBasis& basis, const CVec& psi) {
  Vec n = Vec::Zero(basis.sites());
  for (int64_t i = 0; i < basis.size(); ++i) {
    double w = std::norm(psi(i));
    Bits s = basis.state(i);
    for (int k = 0; k < basis.sites(); ++k)
      if ((s >> k) & 1) n(k) += w;
  }
  return n;
}

}  // namespace mcp::fock
