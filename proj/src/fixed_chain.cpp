#include "mcp/spin_map.hpp"

#include <algorithm>
#include <bit>

namespace mcp::spin {

FixedMonopoleChain fixed_monopole_chain(const ModelParams& p, std::vector<std::pair<int, Pole>> monopoles) {
  std::sort(monopoles.begin(), monopoles.end());
  for (size_t k = 0; k < monopoles.size(); ++k) {
    if (monopoles[k].first < 0 || monopoles[k].first >= p.M) throw ModelError("monopole site out of range");
    if (k && monopoles[k].first == monopoles[k - 1].first) throw ModelError("monopole sites must be distinct");
  }
  FixedMonopoleChain ch;
  ch.M = p.M;
  ch.monopoles = monopoles;
  MagnonMonopoleConfig cfg;
  cfg.monopoles = monopoles;
  ch.constant = heff_diagonal(p, pack(cfg, p.M));
  const double q = p.d / 4.0;
  const bool ring = p.boundary == Boundary::Periodic;
  const size_t nm = monopoles.size();
  if (nm == 0) {
    if (ring) {
      ch.vacuum_ring = true;
    } else {
      ChainSegment s;
      for (int i = 0; i < p.M; ++i) s.cells.push_back(i);
      ch.segments.push_back(s);
    }
    return ch;
  }
  auto field_after = [&](Pole x) { return pole_sign(x) * q; };
  auto field_before = [&](Pole x) { return -pole_sign(x) * q; };
  if (ring) {
    for (size_t k = 0; k < nm; ++k) {
      const auto [s0, p0] = monopoles[k];
      const auto [s1, p1] = monopoles[(k + 1) % nm];
      ChainSegment seg;
      int len = (s1 - s0 - 1 + p.M) % p.M;
      if (nm == 1) len = p.M - 1;
      for (int t = 1; t <= len; ++t) seg.cells.push_back((s0 + t) % p.M);
      seg.h_left = field_after(p0);
      seg.h_right = field_before(p1);
      ch.segments.push_back(seg);
    }
  } else {
    ChainSegment first;
    for (int i = 0; i < monopoles.front().first; ++i) first.cells.push_back(i);
    first.h_right = field_before(monopoles.front().second);
    ch.segments.push_back(first);
    for (size_t k = 0; k + 1 < nm; ++k) {
      ChainSegment seg;
      for (int i = monopoles[k].first + 1; i < monopoles[k + 1].first; ++i) seg.cells.push_back(i);
      seg.h_left = field_after(monopoles[k].second);
      seg.h_right = field_before(monopoles[k + 1].second);
      ch.segments.push_back(seg);
    }
    ChainSegment last;
    for (int i = monopoles.back().first + 1; i < p.M; ++i) last.cells.push_back(i);
    last.h_left = field_after(monopoles.back().second);
    ch.segments.push_back(last);
  }
  return ch;
}

CsrMatrix build_segment_hamiltonian(const ModelParams& p, const ChainSegment& seg) {
  const int L = static_cast<int>(seg.cells.size());
  if (L > 26) throw ModelError("segment too long for explicit basis");
  const int64_t n = int64_t{1} << L;
  const double q = p.d / 4.0;
  auto row = [&](int64_t i, CsrMatrix::RowEntries& out) {
    const std::uint64_t s = static_cast<std::uint64_t>(i);
    out.push_back({i, 2.0 * p.J * std::popcount(s)});
    if (L == 0) return;
    for (int k = 0; k + 1 < L; ++k) out.push_back({static_cast<int64_t>(s ^ (3ull << k)), -q});
    out.push_back({static_cast<int64_t>(s ^ 1ull), seg.h_left});
    out.push_back({static_cast<int64_t>(s ^ (1ull << (L - 1))), seg.h_right});
  };
  return CsrMatrix::build(n, row);
}

CsrMatrix build_vacuum_ring_hamiltonian(const ModelParams& p) {
  const int L = p.M;
  if (L > 26) throw ModelError("ring too long for explicit basis");
  const int64_t n = int64_t{1} << L;
  const double q = p.d / 4.0;
  const int nb = bond_count(p);
  auto row = [&](int64_t i, CsrMatrix::RowEntries& out) {
    const std::uint64_t s = static_cast<std::uint64_t>(i);
    out.push_back({i, 2.0 * p.J * std::popcount(s)});
    for (int a = 0; a < nb; ++a) {
      const int b = (a + 1) % L;
      out.push_back({static_cast<int64_t>(s ^ (1ull << a) ^ (1ull << b)), -q});
    }
  };
  return CsrMatrix::build(n, row);
}

}  // namespace mcp::spin
