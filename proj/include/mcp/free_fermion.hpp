#pragma once

#include <utility>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/model.hpp"
#include "mcp/spin_map.hpp"

namespace mcp::ff {

enum class SiteKind : std::uint8_t { Physical, AuxLeft, AuxRight };

// H = sum_ij c_i^dag A_ij c_j + 1/2 sum_ij B_ij (c_i^dag c_j^dag + c_j c_i).
// Jordan-Wigner strings run from each site to the right end of the form.
// `gauge` is the sign applied to the magnon operator of each site so that all
// bulk bond couplings enter with +d/4; it is undone on reconstruction.
struct QuadraticForm {
  Mat A;
  Mat B;
  std::vector<int> cell;       // lattice cell of each row, -1 for auxiliary spins
  std::vector<SiteKind> kind;
  std::vector<int> gauge;
  bool periodic = false;       // ring without auxiliary spins
};

// Modes with (A+B) phi = eps psi and (A-B) psi = eps phi; phi are eigenvectors
// of C = (A-B)(A+B).
struct BogoliubovSpectrum {
  Vec eps;  // ascending, >= 0
  Mat phi;  // column k = phi_k
  Mat psi;
  std::vector<int> zero_modes;
  int structural_zero_modes = 0;
  double threshold = 0.0;   // on eigenvalues of C
  double zero_gap = 0.0;    // smallest non-zero C eigenvalue over threshold
};

QuadraticForm build_segment_form(const ModelParams& p, const spin::ChainSegment& seg);
// One form per non-empty segment between fixed monopoles (periodic rings only).
std::vector<QuadraticForm> build_extended_chain(const ModelParams& p,
                                                const std::vector<std::pair<int, spin::Pole>>& monopoles);
// Ring of M spins; `antiperiodic` is the even magnon-parity sector.
QuadraticForm build_ring_form(const ModelParams& p, bool antiperiodic);

BogoliubovSpectrum diagonalize_bdg(const QuadraticForm& qf);

double pfaffian(Mat A);

// Energy of the Bogoliubov vacuum, (tr A - sum eps) / 2.
double bdg_vacuum_energy(const QuadraticForm& qf, const BogoliubovSpectrum& sp);
// Parity of the Bogoliubov vacuum, prod (1 - 2 n_l) over all sites.
int bdg_vacuum_parity(const BogoliubovSpectrum& sp);
// Eigenvalue of X_left X_right (auxiliary spins) on the Bogoliubov vacuum.
int aux_product_on_vacuum(const BogoliubovSpectrum& sp);
// 1 when the lowest non-zero mode must be occupied to reach the auxiliary
// sector X_left = X_right = +1.
int edge_occupation(const QuadraticForm& qf, const BogoliubovSpectrum& sp);
double segment_ground_energy(const QuadraticForm& qf, const BogoliubovSpectrum& sp);
double vacuum_ring_energy(const ModelParams& p);

// Magnon density on the physical rows of the form, in row order.
Vec mode_sum_density(const QuadraticForm& qf, const BogoliubovSpectrum& sp);

struct McPWavefunction {
  int M = 0;
  std::vector<std::pair<int, spin::Pole>> monopoles;
  std::vector<int> cells;  // bit k of the amplitude index = magnon on cells[k]
  Vec amplitudes;
  double projection_norm = 0.0;
};

// Explicit-basis reconstruction of the target-sector ground state of one form.
McPWavefunction mcp_state(const QuadraticForm& qf, const BogoliubovSpectrum& sp, const ModelParams& p,
                          int max_cells = 20);
// Single or multi monopole ring state (product over segments).
McPWavefunction mcp_state(const ModelParams& p, const std::vector<std::pair<int, spin::Pole>>& monopoles,
                          int max_cells = 20);
// Per-cell magnon density of a reconstructed state, length M.
Vec wavefunction_density(const McPWavefunction& w);
// Per-cell magnon density from the mode sums, length M.
Vec magnon_density(const ModelParams& p, const std::vector<std::pair<int, spin::Pole>>& monopoles);

struct FixedMonopoleEnergy {
  double energy = 0.0;    // relative to the paramagnetic vacuum configuration
  double constant = 0.0;  // bare monopole diagonal
  double vacuum = 0.0;    // ring ground energy without monopoles
  double relative = 0.0;  // energy - vacuum
  std::vector<double> segments;
};

FixedMonopoleEnergy fixed_monopole_energy(const ModelParams& p,
                                          const std::vector<std::pair<int, spin::Pole>>& monopoles);

}  // namespace mcp::ff
