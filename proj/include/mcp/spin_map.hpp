#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/fock.hpp"
#include "mcp/model.hpp"

namespace mcp::spin {

// Occupation of a double well: Up = |1,0>, Down = |0,1>, North = |1,1>, South = |0,0>.
enum class CellState : std::uint8_t { Up, Down, North, South };

std::vector<CellState> occupation_to_cells(fock::Bits bits, int M);
fock::Bits cells_to_occupation(const std::vector<CellState>& cells);

enum class Pole : std::uint8_t { North, South };

// sigma~ = +1 for South, -1 for North.
inline int pole_sign(Pole p) { return p == Pole::South ? 1 : -1; }

// Per-cell code in the magnon-monopole picture. The vacuum spin is |->> =
// (|up> + |down>)/sqrt2, a magnon is |<-> = (|down> - |up>)/sqrt2.
enum Code : std::uint8_t { kVac = 0, kMagnon = 1, kNorth = 2, kSouth = 3 };

// Two bits per cell, cell i at bits (2i, 2i+1).
using Packed = std::uint64_t;

inline int code_at(Packed c, int i) { return static_cast<int>((c >> (2 * i)) & 3u); }
inline Packed with_code(Packed c, int i, int code) {
  return (c & ~(Packed{3} << (2 * i))) | (static_cast<Packed>(code) << (2 * i));
}

struct MagnonMonopoleConfig {
  std::vector<std::pair<int, Pole>> monopoles;  // (cell, type), ascending cell
  std::uint64_t magnons = 0;                    // bit i set: magnon on cell i
};

Packed pack(const MagnonMonopoleConfig& cfg, int M);
MagnonMonopoleConfig unpack(Packed c, int M);
int count_code(Packed c, int M, int code);
// Conserved fermion number M + n_N - n_S.
int fermion_number(Packed c, int M);

// All placements of the given monopoles times all magnon patterns, ascending order.
std::vector<Packed> enumerate_sector(int M, const std::vector<Pole>& content);
// Union over monopole contents with M + n_N - n_S = Nf.
std::vector<Packed> enumerate_fermion_sector(int M, int Nf);
// Monopoles frozen in place, all magnon patterns on the remaining cells.
std::vector<Packed> enumerate_fixed(int M, const std::vector<std::pair<int, Pole>>& monopoles);

struct HeffOptions {
  bool include_pair_terms = true;
  bool include_hopping = true;
};

struct EffectiveSectorMatrix {
  int M = 0;
  std::vector<Packed> basis;  // ascending
  CsrMatrix H;
  int64_t index(Packed c) const;
};

// Energy of the paramagnetic vacuum in the fermionic model: -J M + n_bonds d/4.
double vacuum_constant(const ModelParams& p);
// Vacuum-referenced diagonal element of Heff.
double heff_diagonal(const ModelParams& p, Packed c);

// One inter-cell hop across bond (a, b): new codes and amplitude before the
// fermionic wrap sign. `pair` marks monopole pair creation or annihilation.
struct BondTransition {
  int ca, cb;
  double amp;
  bool pair;
};
std::vector<BondTransition> bond_transitions(int ca, int cb, double J1);

EffectiveSectorMatrix build_heff(const ModelParams& p, std::vector<Packed> basis,
                                 const HeffOptions& opt = {}, bool parallel = true);

// Open transverse-field Ising segment between (or beside) fixed monopoles:
// H = 2J sum n - d/4 sum X X + h_left X_first + h_right X_last, X = m + m^dagger.
struct ChainSegment {
  std::vector<int> cells;
  double h_left = 0.0;
  double h_right = 0.0;
};

struct FixedMonopoleChain {
  int M = 0;
  std::vector<std::pair<int, Pole>> monopoles;
  std::vector<ChainSegment> segments;
  bool vacuum_ring = false;  // periodic, no monopoles
  double constant = 0.0;     // diagonal energy of the monopoles on the paramagnetic vacuum
};

FixedMonopoleChain fixed_monopole_chain(const ModelParams& p, std::vector<std::pair<int, Pole>> monopoles);
// Bit k of the basis index = magnon on segment cell k.
CsrMatrix build_segment_hamiltonian(const ModelParams& p, const ChainSegment& seg);
// Periodic ring of M spins without monopoles (open chain for open boundary).
CsrMatrix build_vacuum_ring_hamiltonian(const ModelParams& p);

}  // namespace mcp::spin
