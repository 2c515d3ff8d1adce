#pragma once

#include <stdexcept>
#include <string>

namespace mcp {

enum class Boundary { Periodic, Open };

// Couplings of the dipolar double-well superlattice. Energies in units of J.
struct ModelParams {
  int M = 11;
  double J = 1.0;
  double J1 = 0.02;
  double d = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  Boundary boundary = Boundary::Periodic;
};

struct DerivedCouplings {
  double V_intra;
  double V_inter;
  double J1_ratio;  // J / J1
  double time_unit; // 1 / J
};

// Invalid parameters or configuration input.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver or propagator could not meet its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const ModelParams& p);
DerivedCouplings derive_couplings(const ModelParams& p);

inline int bond_count(const ModelParams& p) {
  return p.boundary == Boundary::Periodic ? p.M : p.M - 1;
}

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

}  // namespace mcp
