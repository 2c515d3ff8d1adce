#include "mcp/validation.hpp"

#include <algorithm>
#include <cmath>

#include "mcp/eigensolve.hpp"
#include "mcp/fock.hpp"
#include "mcp/free_fermion.hpp"
#include "mcp/spin_map.hpp"

namespace mcp::check {

OracleComparison compare_fixed_monopole(const ModelParams& p, int site) {
  const std::vector<std::pair<int, spin::Pole>> mono{{site, spin::Pole::South}};
  const auto ch = spin::fixed_monopole_chain(p, mono);
  if (ch.segments.size() != 1) throw ModelError("expected one segment for a single monopole");
  const auto& seg = ch.segments.front();
  const auto ed = dense_eigenpairs(spin::build_segment_hamiltonian(p, seg).to_dense(), 1);
  const Vec g = ed.vectors.col(0);

  OracleComparison r;
  r.energy_ff = ff::fixed_monopole_energy(p, mono).energy;
  r.energy_ed = ch.constant + ed.values(0);
  r.energy_diff = std::abs(r.energy_ff - r.energy_ed);
  r.density_ed = Vec::Zero(p.M);
  for (int64_t b = 0; b < g.size(); ++b)
    for (size_t k = 0; k < seg.cells.size(); ++k)
      if ((b >> k) & 1) r.density_ed(seg.cells[k]) += g(b) * g(b);
  r.density_ff = ff::magnon_density(p, mono);
  r.density_diff = (r.density_ff - r.density_ed).cwiseAbs().maxCoeff();
  const auto w = ff::mcp_state(p, mono, 24);
  r.wf_density_diff = (ff::wavefunction_density(w) - r.density_ed).cwiseAbs().maxCoeff();
  r.overlap = std::abs(w.amplitudes.dot(g));
  return r;
}

double vacuum_ring_difference(const ModelParams& p) {
  const auto ed = lowest_eigenpairs(spin::build_vacuum_ring_hamiltonian(p), 1);
  return std::abs(ff::vacuum_ring_energy(p) - ed.values(0));
}

MappingComparison compare_mapping(const ModelParams& p, int Nf) {
  const fock::SectorBasis basis(p.M, Nf);
  const auto hfh = fock::build_hfh(p, basis);
  const auto em = spin::build_heff(p, spin::enumerate_fermion_sector(p.M, Nf));
  MappingComparison r;
  r.dim_fh = basis.size();
  r.dim_heff = static_cast<int64_t>(em.basis.size());
  if (r.dim_fh != r.dim_heff) {
    r.max_gap_diff = INFINITY;
    return r;
  }
  const Vec a = dense_eigenpairs(hfh.to_dense()).values;
  const Vec b = dense_eigenpairs(em.H.to_dense()).values;
  r.offset = a(0) - b(0);
  for (int64_t k = 0; k < a.size(); ++k)
    r.max_gap_diff = std::max(r.max_gap_diff, std::abs((a(k) - a(0)) - (b(k) - b(0))));
  return r;
}

}  // namespace mcp::check
