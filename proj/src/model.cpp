#include "mcp/model.hpp"

#include <cmath>

namespace mcp {

void validate(const ModelParams& p) {
  if (p.J != 1.0) throw ModelError("J is the energy unit and must equal 1");
  if (!(p.J1 > 0.0)) throw ModelError("J1 must be positive");
  if (!(p.d >= 0.0)) throw ModelError("d must be non-negative");
  if (p.M < 3) throw ModelError("M must be at least 3");
  if (!std::isfinite(p.g1) || !std::isfinite(p.g2)) throw ModelError("tilt must be finite");
}

DerivedCouplings derive_couplings(const ModelParams& p) {
  validate(p);
  return {1.5 * p.d, p.d, p.J / p.J1, 1.0 / p.J};
}

std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "open") return Boundary::Open;
  throw ModelError("boundary must be 'periodic' or 'open', got '" + s + "'");
}

}  // namespace mcp
