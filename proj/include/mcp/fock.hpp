#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/eigensolve.hpp"
#include "mcp/model.hpp"

namespace mcp::fock {

using Bits = std::uint64_t;

struct OccupationState {
  Bits bits = 0;
  int n = 0;
};

// Fixed-particle-number Fock states over 2M sites, ascending bitmask order.
// Site 2c is the left well of cell c, site 2c+1 the right well.
class SectorBasis {
 public:
  SectorBasis(int M, int N);
  int cells() const { return M_; }
  int sites() const { return 2 * M_; }
  int particles() const { return N_; }
  int64_t size() const { return static_cast<int64_t>(states_.size()); }
  Bits state(int64_t i) const { return states_[i]; }
  const std::vector<Bits>& states() const { return states_; }
  // -1 when absent.
  int64_t index(Bits b) const;

 private:
  int M_, N_;
  std::vector<Bits> states_;
};

SectorBasis build_sector_basis(int M, int N);

// Sign of c_to^dagger c_from acting on `bits` (from occupied, to empty):
// parity of occupied sites strictly between the two.
int hop_sign(Bits bits, int from, int to);

// Site energies g1*i + g2*i^2 with 1-based site index i.
std::vector<double> tilt_profile(const ModelParams& p);

struct BuildOptions {
  int64_t max_dim = 2'000'000;
  bool parallel = true;
};

CsrMatrix build_hfh(const ModelParams& p, const SectorBasis& basis,
                    const std::vector<double>* tilt = nullptr, const BuildOptions& opt = {});

EigenResult ground_state(const CsrMatrix& H, int k, const EigenOptions& opt = {});

// Occupation of each site in a state vector over the basis.
Vec site_densities(const SectorBasis& basis, const CVec& psi);

}  // namespace mcp::fock
