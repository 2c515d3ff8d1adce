#pragma once

#include "mcp/csr.hpp"
#include "mcp/model.hpp"

namespace mcp::check {

// Free-fermion solution of a single South monopole at `site` against dense ED
// of the same fixed-monopole magnon Hamiltonian.
struct OracleComparison {
  double energy_ff = 0.0;
  double energy_ed = 0.0;
  double energy_diff = 0.0;      // |ff - ed|
  double density_diff = 0.0;     // max over cells, mode sums vs ED
  double wf_density_diff = 0.0;  // max over cells, reconstructed state vs ED
  double overlap = 0.0;          // |<ff|ed>|
  Vec density_ff, density_ed;
};

OracleComparison compare_fixed_monopole(const ModelParams& p, int site = 0);

// |E_ff - E_ed| for the monopole-free ring.
double vacuum_ring_difference(const ModelParams& p);

// Largest difference between sorted level gaps of the fermionic sector with Nf
// particles and the magnon-monopole sector with the same fermion number.
struct MappingComparison {
  int64_t dim_fh = 0, dim_heff = 0;
  double max_gap_diff = 0.0;
  double offset = 0.0;  // E0(FH) - E0(Heff), equals the vacuum constant
};

MappingComparison compare_mapping(const ModelParams& p, int Nf);

}  // namespace mcp::check
