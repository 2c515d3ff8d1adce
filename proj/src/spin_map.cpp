#include "mcp/spin_map.hpp"

#include <algorithm>
#include <string>

namespace mcp::spin {

std::vector<CellState> occupation_to_cells(fock::Bits bits, int M) {
  std::vector<CellState> cells(M);
  for (int c = 0; c < M; ++c) {
    const bool l = (bits >> (2 * c)) & 1, r = (bits >> (2 * c + 1)) & 1;
    cells[c] = l ? (r ? CellState::North : CellState::Up) : (r ? CellState::Down : CellState::South);
  }
  return cells;
}

fock::Bits cells_to_occupation(const std::vector<CellState>& cells) {
  fock::Bits b = 0;
  for (size_t c = 0; c < cells.size(); ++c) {
    const bool l = cells[c] == CellState::Up || cells[c] == CellState::North;
    const bool r = cells[c] == CellState::Down || cells[c] == CellState::North;
    if (l) b |= fock::Bits{1} << (2 * c);
    if (r) b |= fock::Bits{1} << (2 * c + 1);
  }
  return b;
}

Packed pack(const MagnonMonopoleConfig& cfg, int M) {
  Packed c = 0;
  for (int i = 0; i < M; ++i)
    if ((cfg.magnons >> i) & 1) c = with_code(c, i, kMagnon);
  for (auto [site, pole] : cfg.monopoles) {
    if (site < 0 || site >= M) throw ModelError("monopole site out of range");
    if (code_at(c, site) != kVac) throw ModelError("cell holds both a magnon and a monopole");
    c = with_code(c, site, pole == Pole::North ? kNorth : kSouth);
  }
  return c;
}

MagnonMonopoleConfig unpack(Packed c, int M) {
  MagnonMonopoleConfig cfg;
  for (int i = 0; i < M; ++i) {
    const int k = code_at(c, i);
    if (k == kMagnon) cfg.magnons |= std::uint64_t{1} << i;
    if (k == kNorth) cfg.monopoles.push_back({i, Pole::North});
    if (k == kSouth) cfg.monopoles.push_back({i, Pole::South});
  }
  return cfg;
}

int count_code(Packed c, int M, int code) {
  int n = 0;
  for (int i = 0; i < M; ++i) n += code_at(c, i) == code;
  return n;
}

int fermion_number(Packed c, int M) { return M + count_code(c, M, kNorth) - count_code(c, M, kSouth); }

namespace {

void fill(int M, int i, int nN, int nS, Packed cur, std::vector<Packed>& out) {
  if (i == M) {
    if (nN == 0 && nS == 0) out.push_back(cur);
    return;
  }
  if (M - i < nN + nS) return;
  fill(M, i + 1, nN, nS, with_code(cur, i, kVac), out);
  fill(M, i + 1, nN, nS, with_code(cur, i, kMagnon), out);
  if (nN) fill(M, i + 1, nN - 1, nS, with_code(cur, i, kNorth), out);
  if (nS) fill(M, i + 1, nN, nS - 1, with_code(cur, i, kSouth), out);
}

void check_m(int M) {
  if (M < 1 || M > 31) throw ModelError("cell count out of range for packed configurations");
}

}  // namespace

std::vector<Packed> enumerate_sector(int M, const std::vector<Pole>& content) {
  check_m(M);
  if (static_cast<int>(content.size()) > M) throw ModelError("more monopoles than cells");
  int nN = 0, nS = 0;
  for (Pole q : content) (q == Pole::North ? nN : nS)++;
  std::vector<Packed> out;
  fill(M, 0, nN, nS, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Packed> enumerate_fermion_sector(int M, int Nf) {
  check_m(M);
  std::vector<Packed> out;
  for (int nS = 0; nS <= M; ++nS) {
    const int nN = Nf - M + nS;
    if (nN < 0 || nN + nS > M) continue;
    fill(M, 0, nN, nS, 0, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Packed> enumerate_fixed(int M, const std::vector<std::pair<int, Pole>>& monopoles) {
  check_m(M);
  MagnonMonopoleConfig base;
  base.monopoles = monopoles;
  const Packed b = pack(base, M);
  std::vector<int> free;
  for (int i = 0; i < M; ++i)
    if (code_at(b, i) == kVac) free.push_back(i);
  std::vector<Packed> out;
  const std::uint64_t n = std::uint64_t{1} << free.size();
  out.reserve(n);
  for (std::uint64_t m = 0; m < n; ++m) {
    Packed c = b;
    for (size_t k = 0; k < free.size(); ++k)
      if ((m >> k) & 1) c = with_code(c, free[k], kMagnon);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int64_t EffectiveSectorMatrix::index(Packed c) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), c);
  if (it == basis.end() || *it != c) return -1;
  return it - basis.begin();
}

double vacuum_constant(const ModelParams& p) { return -p.J * p.M + bond_count(p) * p.d / 4.0; }

namespace {

bool is_spin(int code) { return code == kVac || code == kMagnon; }
double n_right(int code) { return code == kNorth ? 1.0 : code == kSouth ? 0.0 : 0.5; }
double n_left(int code) { return n_right(code); }

}  // namespace

double heff_diagonal(const ModelParams& p, Packed c) {
  double e = 0.0;
  for (int i = 0; i < p.M; ++i) {
    const int k = code_at(c, i);
    e += k == kVac ? -p.J : k == kMagnon ? p.J : k == kNorth ? 1.5 * p.d : 0.0;
  }
  const int nb = bond_count(p);
  for (int a = 0; a < nb; ++a) {
    const int b = (a + 1) % p.M;
    e += p.d * n_right(code_at(c, a)) * n_left(code_at(c, b));
  }
  return e - vacuum_constant(p);
}

std::vector<BondTransition> bond_transitions(int ca, int cb, double J1) {
  // Fermion cell types: 0 Up, 1 Down, 2 North, 3 South. A hop moves a fermion
  // from the left well of b to the right well of a (or back).
  enum { U = 0, D = 1, N = 2, S = 3 };
  static const int moves[4][4] = {{U, U, N, S}, {U, N, N, D}, {S, U, D, S}, {S, N, D, D}};
  // <type|code> in units of 1/sqrt2 for spins
  auto ov = [](int type, int code) -> int {
    if (code == kNorth) return type == N;
    if (code == kSouth) return type == S;
    if (type == U) return code == kVac ? 1 : -1;
    if (type == D) return 1;
    return 0;
  };
  auto finals = [](int type) -> std::vector<int> {
    if (type == N) return {kNorth};
    if (type == S) return {kSouth};
    return {kVac, kMagnon};
  };
  std::vector<BondTransition> out;
  for (int m = 0; m < 4; ++m) {
    for (int dir = 0; dir < 2; ++dir) {
      const int ta = moves[m][dir ? 2 : 0], tb = moves[m][dir ? 3 : 1];
      const int ta2 = moves[m][dir ? 0 : 2], tb2 = moves[m][dir ? 1 : 3];
      const int f = ov(ta, ca) * ov(tb, cb);
      if (f == 0) continue;
      for (int a2 : finals(ta2)) {
        for (int b2 : finals(tb2)) {
          const int g = ov(ta2, a2) * ov(tb2, b2);
          // every move carries exactly two spin projections of 1/sqrt2
          out.push_back({a2, b2, -J1 * 0.5 * f * g, m == 0 || m == 3});
        }
      }
    }
  }
  return out;
}

EffectiveSectorMatrix build_heff(const ModelParams& p, std::vector<Packed> basis, const HeffOptions& opt,
                                 bool parallel) {
  std::sort(basis.begin(), basis.end());
  EffectiveSectorMatrix em;
  em.M = p.M;
  em.basis = std::move(basis);
  if (em.basis.empty()) throw ModelError("empty sector");
  const int Nf = fermion_number(em.basis.front(), p.M);
  for (Packed c : em.basis)
    if (fermion_number(c, p.M) != Nf) throw ModelError("sector mixes fermion numbers");
  const int nb = bond_count(p);
  const double q = p.d / 4.0;
  bool open_basis = false;

  auto row = [&](int64_t i, CsrMatrix::RowEntries& out) {
    const Packed c = em.basis[i];
    out.push_back({i, heff_diagonal(p, c)});
    auto emit = [&](Packed t, double v) {
      const int64_t j = em.index(t);
      if (j < 0) {
#pragma omp atomic write
        open_basis = true;
        return;
      }
      out.push_back({j, v});
    };
    auto flip = [](Packed x, int k) { return x ^ (Packed{1} << (2 * k)); };
    for (int a = 0; a < nb; ++a) {
      const int b = (a + 1) % p.M;
      const int ca = code_at(c, a), cb = code_at(c, b);
      if (is_spin(ca) && is_spin(cb)) {
        emit(flip(flip(c, a), b), -q);
        emit(flip(c, a), q);
        emit(flip(c, b), -q);
      } else if (ca == kNorth && is_spin(cb)) {
        emit(flip(c, b), -2.0 * q);
      } else if (is_spin(ca) && cb == kNorth) {
        emit(flip(c, a), 2.0 * q);
      }
      if (!opt.include_hopping) continue;
      const double sgn = (b == 0 && (Nf - 1) % 2 != 0) ? -1.0 : 1.0;
      for (const auto& t : bond_transitions(ca, cb, p.J1)) {
        if (t.pair && !opt.include_pair_terms) continue;
        emit(with_code(with_code(c, a, t.ca), b, t.cb), sgn * t.amp);
      }
    }
  };
  em.H = CsrMatrix::build(static_cast<int64_t>(em.basis.size()), row, parallel);
  if (open_basis) throw ModelError("basis not closed under the requested terms");
  return em;
}

}  // namespace mcp::spin
