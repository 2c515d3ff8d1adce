// mcpolaron: monopole-cored polaron simulations in the dipolar superlattice gas.
#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <sstream>

#include "mcp/config.hpp"
#include "mcp/output.hpp"
#include "mcp/tasks.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mcp::cli;
  CLI::App app{"Monopole-cored polaron toolkit"};
  app.set_version_flag("--version", kVersion);
  std::string config_path;
  RunContext ctx;
  app.add_option("--config", config_path, "sectioned key = value configuration file");
  app.add_option("--out", ctx.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", ctx.threads, "OpenMP threads, 0 = runtime default")->check(CLI::NonNegativeNumber);
  app.add_flag("--emit-plots", ctx.emit_plots, "write gnuplot scripts next to the CSV files");
  app.require_subcommand(1, 1);
  app.fallthrough();
  const std::map<std::string, std::string> help{
      {"ground", "lowest levels and densities of a fermionic sector"},
      {"polaron", "McP state, magnon density and parameters"},
      {"scan-binding", "E_B, J_McP and hopping channels over a d grid"},
      {"dispersion", "McP and bare-monopole dispersions"},
      {"dynamics", "tilt-driven Bloch run and its spectrum"},
      {"bipolaron", "N-S interaction and bipolaron bands"},
      {"validate", "free-fermion, exact and perturbative cross-checks"}};
  for (const auto& s : subcommands()) app.add_subcommand(s, help.at(s));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json manifest{{"tool", "mcpolaron"}, {"version", kVersion}, {"command", cmd},
                          {"started_utc", utc_now()}, {"threads", ctx.threads}};
  int rc = 0;
  std::string status = "ok";
  nlohmann::json diag = nlohmann::json::object();
  std::unique_ptr<OutputSet> out;
  try {
    out = std::make_unique<OutputSet>(ctx.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot create output directory: " << e.what() << "\n";
    return 2;
  }
  RunConfig cfg;
  try {
    if (config_path.empty()) {
      std::istringstream empty;
      cfg = parse_config(empty, "<defaults>");
    } else {
      cfg = load_config(config_path);
    }
    nlohmann::json settings = nlohmann::json::object();
    for (const auto& [k, v] : effective_settings(cfg)) settings[k] = v;
    manifest["config"] = {{"source", cfg.source}, {"settings", settings}};
    if (!run_task(cmd, cfg, ctx, *out, diag)) {
      status = "check-failed";
      rc = 3;
    }
  } catch (const mcp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    diag["error"] = e.what();
    status = "numerical-failure";
    rc = 3;
  } catch (const mcp::ModelError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    diag["error"] = e.what();
    status = "config-error";
    rc = 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    diag["error"] = e.what();
    status = "numerical-failure";
    rc = 3;
  }
  manifest["status"] = status;
  manifest["exit_code"] = rc;
  manifest["diagnostics"] = diag;
  manifest["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["files"] = out->inventory();
  try {
    out->write_text("manifest.json", manifest.dump(2) + "\n", "manifest");
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write manifest: " << e.what() << "\n";
    return rc ? rc : 3;
  }
  if (rc == 0) std::cout << cmd << ": wrote " << out->files().size() << " files to " << ctx.out_dir << "\n";
  return rc;
}
