#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "mcp/dynamics.hpp"
#include "mcp/model.hpp"
#include "mcp/spectrum.hpp"

namespace mcp::cli {

// Malformed or unknown configuration input; `line` is 1-based, 0 when unknown.
class ConfigError : public ModelError {
 public:
  ConfigError(const std::string& source, int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

struct GroundConfig {
  int N = -1;       // fermion number, -1 = M (half filling)
  int levels = 4;
};

struct PolaronConfig {
  int site = 0;
  int order = 2;    // perturbative comparison order
};

struct ScanConfig {
  std::vector<double> d_grid{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};
};

struct DispersionConfig {
  int k_points = 65;
};

struct DynamicsConfig {
  dyn::BlochOptions bloch;
  dyn::Signal signal = dyn::Signal::SiteSummed;
  dyn::SpectrumOptions spectrum;
  int stride = 1;   // rows of the trajectory CSV
};

struct BipolaronConfig {
  int r_max = 0;    // 0 = (M-1)/2
};

struct ValidateConfig {
  std::vector<int> M_grid{5, 7, 9, 11};
  std::vector<double> d_grid{0.5, 1.0, 2.5};
  std::vector<int> mapping_M{3, 4};
  std::vector<double> pt_d_grid{0.25, 0.5, 1.0, 2.0, 3.0};
};

struct RunConfig {
  ModelParams model;
  GroundConfig ground;
  PolaronConfig polaron;
  ScanConfig scan;
  DispersionConfig dispersion;
  DynamicsConfig dynamics;
  BipolaronConfig bipolaron;
  ValidateConfig validate;
  std::string source = "<defaults>";
  std::vector<std::pair<std::string, std::string>> entries;  // section.key = value as read
};

RunConfig parse_config(std::istream& in, const std::string& source);
RunConfig load_config(const std::string& path);
// Every effective setting as section.key = value, in a fixed order.
std::vector<std::pair<std::string, std::string>> effective_settings(const RunConfig& c);

}  // namespace mcp::cli
