#pragma once

#include <array>
#include <map>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/model.hpp"

namespace mcp::polaron {

// Single monopole-cored polaron. Channels: 0 bare monopole hop, 1 hop that
// creates a magnon behind the monopole, 2 hop that absorbs the magnon ahead,
// 3 hop that does both.
struct McPModel {
  double d = 0.0;
  int M = 0;
  double E_B = 0.0;
  double J_McP = 0.0;
  std::array<double, 4> channels{};
  double bare_constant = 0.0;  // diagonal energy of the undressed monopole
  double vacuum = 0.0;         // ring ground energy without monopoles
  double projection_norm = 0.0;
};

McPModel build_mcp_model(const ModelParams& p);

struct Dispersion {
  std::vector<double> k;
  std::vector<double> mcp;   // E_B - 2 J_McP cos k
  std::vector<double> bare;  // -J1 cos k
  double mcp_bandwidth = 0.0;
  double bare_bandwidth = 0.0;
};

Dispersion dispersion(const McPModel& m, double J1, const std::vector<double>& k);
std::vector<double> uniform_k_grid(int n);

struct TiltPotential {
  double g1 = 0.0, g2 = 0.0;
  std::vector<double> v;  // v[j-1] for cell j = 1..M
};

TiltPotential tilt_to_mcp_potential(double g1, double g2, int M);

// Tight-binding McP ring with on-site potential; `twist` multiplies the wrap hop.
Mat effective_mcp_hamiltonian(double J_McP, const std::vector<double>& onsite, double twist);
// Wrap sign seen by a single South monopole on a ring of M cells.
double single_monopole_twist(int M);

struct BarrierGaps {
  double E_v = 0.0, E_m = 0.0, E_mm = 0.0;
};

struct TwoPolaronModel {
  ModelParams params;
  int r_max = 0;
  std::map<int, double> V;  // r in [-r_max, r_max], V[0] = pseudobarrier
  BarrierGaps gaps;
  double J_McP = 0.0;
  double reference = 0.0;   // fixed-pair energy at maximal separation
};

// Pseudobarrier (1/E_v - 2/E_m + 1/E_mm)^-1; throws NumericalError when the
// denominator vanishes (perfect reflection).
double pseudobarrier(const BarrierGaps& g);

TwoPolaronModel build_two_polaron_model(const ModelParams& p, int r_max);

struct BipolaronBlock {
  double K = 0.0;
  Vec energies;        // ascending
  Mat states;          // columns over r = -r_max..r_max
  double continuum_edge = 0.0;
  int n_bound = 0;
  int n_branches = 0;  // bound states grouped in parity doublets
  std::vector<double> parity;  // <r -> -r> for each bound state
};

struct BipolaronSpectrum {
  std::vector<BipolaronBlock> blocks;
};

Mat relative_hamiltonian(const TwoPolaronModel& m, double K);
BipolaronSpectrum bipolaron_spectrum(const TwoPolaronModel& m, const std::vector<double>& K);
// Centre-of-mass momenta 2 pi n / M folded into (-pi, pi].
std::vector<double> center_of_mass_grid(int M);

// Lowest zero-momentum levels of the full fermion-number-M sector of Heff whose
// weight on two-monopole configurations exceeds one half, measured from the
// fixed-pair energy at maximal separation.
std::vector<double> exact_pair_levels(const ModelParams& p, int count);

}  // namespace mcp::polaron
