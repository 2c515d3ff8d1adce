#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mcp/config.hpp"
#include "mcp/output.hpp"

namespace mcp::cli {

struct RunContext {
  std::string out_dir = "out";
  bool emit_plots = false;
  int threads = 0;  // 0 = OpenMP default
};

const std::vector<std::string>& subcommands();

// Runs one subcommand; files go to `out`, run diagnostics into `diag`.
// Returns false when a validation check fails.
bool run_task(const std::string& cmd, const RunConfig& cfg, const RunContext& ctx, OutputSet& out,
              nlohmann::json& diag);

}  // namespace mcp::cli
