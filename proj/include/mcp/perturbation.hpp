#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/model.hpp"

namespace mcp::pt {

// Low-order perturbative dressing of a South monopole fixed at `site`.
// Keys are magnon bitmasks over ring cells.
struct PerturbativeMcP {
  int order = 1;
  int M = 0;
  int site = 0;
  std::map<std::uint64_t, double> amplitudes;  // normalized
  double norm = 1.0;                           // norm before normalization
};

PerturbativeMcP mcp_first_order(const ModelParams& p, int site);
PerturbativeMcP mcp_second_order(const ModelParams& p, int site);

// Unnormalized coefficient of a configuration given as a list of magnon cells.
double raw_coefficient(const PerturbativeMcP& s, const std::vector<int>& cells);

// Per-cell magnon density, length M.
Vec density(const PerturbativeMcP& s);
// Amplitudes in the chain basis where bit k = magnon on cell (site + 1 + k) mod M.
Vec chain_vector(const PerturbativeMcP& s);

// ||a - b||_2 / ||b||_2
double relative_deviation(const Vec& a, const Vec& b);

}  // namespace mcp::pt
