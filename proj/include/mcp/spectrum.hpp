#pragma once

#include <string>
#include <vector>

#include "mcp/csr.hpp"
#include "mcp/dynamics.hpp"

namespace mcp::dyn {

enum class Signal { CenterOfMass, SiteSummed };

std::string to_string(Signal s);
Signal signal_from_string(const std::string& s);

struct Peak {
  double omega = 0.0;   // interpolated angular frequency
  double power = 0.0;   // interpolated height
  int bin = 0;
};

struct SpectrumOptions {
  double threshold = 0.05;  // relative to the largest non-zero-frequency power
  double omega_min = 0.0;   // peaks searched in [omega_min, omega_max]
  double omega_max = -1.0;  // negative = Nyquist
};

struct Spectrum {
  std::vector<double> omega;
  std::vector<double> power;
  std::vector<Peak> peaks;   // descending power
  double bin = 0.0;          // 2 pi / (N dt)
  double parseval_error = 0.0;
  bool resolution_warning = false;  // dominant period longer than T / 2
};

// Mean-detrended, Hann-windowed power of each column, summed over columns.
Spectrum power_spectrum(const Mat& series, double dt, const SpectrumOptions& opt = {});
Spectrum spectrum(const Trajectory& tr, Signal sig, const SpectrumOptions& opt = {});

}  // namespace mcp::dyn
