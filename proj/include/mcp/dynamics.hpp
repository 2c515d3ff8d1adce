#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/model.hpp"
#include "mcp/propagate.hpp"

namespace mcp::dyn {

enum class Engine { FullED, EffectiveMcP };
enum class Initial { Bare, Dressed };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);
std::string to_string(Initial i);
Initial initial_from_string(const std::string& s);

struct BlochOptions {
  Engine engine = Engine::EffectiveMcP;
  Initial initial = Initial::Bare;
  double T = 2e4;
  double dt = 1.0;         // sampling interval
  int site = -1;           // 0-based start cell, -1 = central cell (M-1)/2
  EvolveMethod method = EvolveMethod::Auto;
  int64_t max_dim = 20000;            // full-ED sector cap
  std::optional<CVec> psi0;           // overrides `initial` when set
  int batch = 512;                    // samples per spectral batch
};

// rho(t, x) is the net South-monopole charge of cell x (1 - cell occupation
// in the fermionic engine); com uses the 1-based cell coordinate.
struct Trajectory {
  Engine engine = Engine::EffectiveMcP;
  int M = 0;
  int64_t dim = 0;
  std::vector<double> times;
  Mat rho;                       // samples x M
  std::vector<double> com;
  std::vector<double> norm;
  std::vector<double> energy;
  double J_McP = 0.0;            // effective engine only
  std::string method;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
};

Trajectory run_bloch(const ModelParams& p, const BlochOptions& opt);

// Fock-space image of a fixed-monopole magnon state; the bare monopole when
// `dressed` is false.
CVec fock_monopole_state(const ModelParams& p, int site, bool dressed);

// Effective-engine Hamiltonian used by run_bloch.
Mat effective_engine_hamiltonian(const ModelParams& p, double J_McP);

}  // namespace mcp::dyn
