#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mcp/config.hpp"
#include "mcp/output.hpp"

namespace fs = std::filesystem;
using namespace mcp;
using namespace mcp::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mcpolaron_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

int run(const std::string& args, const fs::path& err = {}) {
  std::string cmd = std::string(MCP_CLI_PATH) + " " + args + " > /dev/null";
  cmd += err.empty() ? " 2> /dev/null" : " 2> '" + err.string() + "'";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "cfg");
}

int data_rows(const std::string& csv) {
  int n = 0;
  std::istringstream in(csv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

}  // namespace

TEST(Config, ParsesSectionsAndLists) {
  const auto c = parse(
      "# comment\n[model]\nM = 9\nd = 0.75  # trailing\nboundary = open\n\n"
      "[scan]\nd_grid = 0.5, 1, 2.5\n[dynamics]\nengine = full-ed\nT = 100\n");
  EXPECT_EQ(c.model.M, 9);
  EXPECT_DOUBLE_EQ(c.model.d, 0.75);
  EXPECT_EQ(c.model.boundary, Boundary::Open);
  EXPECT_EQ(c.scan.d_grid, (std::vector<double>{0.5, 1.0, 2.5}));
  EXPECT_EQ(c.dynamics.bloch.engine, dyn::Engine::FullED);
  EXPECT_DOUBLE_EQ(c.dynamics.bloch.T, 100.0);
}

TEST(Config, RejectsUnknownKeyWithLine) {
  try {
    parse("[model]\nM = 7\ndelta = 0.3\n");
    FAIL() << "no error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    const std::string m = e.what();
    EXPECT_NE(m.find("delta"), std::string::npos);
    EXPECT_NE(m.find("cfg:3"), std::string::npos);
  }
}

TEST(Config, RejectsMalformedInput) {
  auto line_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[model]\nM = 7\nM = 9\n"), 3);
  EXPECT_EQ(line_of("d = 1\n"), 1);
  EXPECT_EQ(line_of("[modle]\n"), 1);
  EXPECT_EQ(line_of("[model]\n\nd 1\n"), 3);
  EXPECT_EQ(line_of("[model]\nd = abc\n"), 2);
  EXPECT_EQ(line_of("[model\n"), 1);
  EXPECT_EQ(line_of("[dynamics]\nengine = tdvp\n"), 2);
  EXPECT_THROW(parse("[model]\nd = -1\n"), ModelError);
}

TEST(Config, EffectiveSettingsListEveryKey) {
  const auto s = effective_settings(parse(""));
  bool found = false;
  for (auto& [k, v] : s)
    if (k == "model.J1") found = v == num(0.02);
  EXPECT_TRUE(found);
  EXPECT_GT(s.size(), 25u);
}

TEST(Output, NumberFormatAndCsv) {
  EXPECT_EQ(num(0.1), "0.10000000000000001");
  EXPECT_EQ(num(-2.25), "-2.25");
  EXPECT_EQ(num(7), "7");
  CsvTable t;
  t.comments = {"d = 1"};
  t.columns = {"a", "b"};
  t.add({num(1.0), num(2.0)});
  const std::string csv = render_csv(t);
  EXPECT_EQ(csv.rfind("# units:", 0), 0u);
  EXPECT_NE(csv.find("\n# d = 1\na,b\n1,2\n"), std::string::npos);
  // FIPS 180-2 test vector
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, UnknownKeyExitsWithConfigError) {
  const auto dir = scratch("badkey");
  write(dir / "bad.cfg", "[model]\nM = 7\n[scan]\nd_list = 1, 2\n");
  const int rc = run("scan-binding --config '" + (dir / "bad.cfg").string() + "' --out '" + (dir / "o").string() + "'",
                     dir / "err.txt");
  EXPECT_EQ(rc, 2);
  const std::string err = slurp(dir / "err.txt");
  EXPECT_NE(err.find("d_list"), std::string::npos) << err;
  EXPECT_NE(err.find(":4:"), std::string::npos) << err;
}

TEST(Cli, UsageErrors) {
  const auto dir = scratch("usage");
  const std::string out = " --out '" + dir.string() + "'";
  EXPECT_EQ(run("" + out), 2);
  EXPECT_EQ(run("teleport" + out), 2);
  EXPECT_EQ(run("ground --config /nonexistent/file.cfg" + out), 2);
  // config failures are still recorded
  const auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(man["exit_code"], 2);
  EXPECT_EQ(man["status"], "config-error");
}

TEST(Cli, ScanBindingIsReproducibleAndManifested) {
  const auto dir = scratch("scan");
  write(dir / "scan.cfg", "[model]\nM = 9\n[scan]\nd_grid = 0.5, 1, 2.5\n");
  const std::string cfg = " --config '" + (dir / "scan.cfg").string() + "'";
  ASSERT_EQ(run("scan-binding" + cfg + " --threads 1 --out '" + (dir / "a").string() + "'"), 0);
  ASSERT_EQ(run("scan-binding" + cfg + " --threads 2 --emit-plots --out '" + (dir / "b").string() + "'"), 0);
  const std::string a = slurp(dir / "a" / "scan_binding.csv"), b = slurp(dir / "b" / "scan_binding.csv");
  EXPECT_EQ(data_rows(a), 3);
  EXPECT_EQ(a, b);

  const auto man = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  EXPECT_EQ(man["command"], "scan-binding");
  EXPECT_EQ(man["exit_code"], 0);
  bool saw_csv = false, saw_plot = false;
  for (const auto& f : man["files"]) {
    const fs::path p = dir / "b" / f["file"].get<std::string>();
    ASSERT_TRUE(fs::exists(p)) << p;
    EXPECT_EQ(f["sha256"], sha256_hex(slurp(p)));
    EXPECT_EQ(f["bytes"].get<std::size_t>(), fs::file_size(p));
    saw_csv |= f["kind"] == "csv";
    saw_plot |= f["kind"] == "plot";
  }
  EXPECT_TRUE(saw_csv);
  EXPECT_TRUE(saw_plot);
  EXPECT_FALSE(fs::exists(dir / "a" / "scan_binding.gp"));
}

TEST(Cli, EverySubcommandRunsOnSmallConfig) {
  const auto dir = scratch("all");
  write(dir / "small.cfg",
        "[model]\nM = 5\nd = 1\ng1 = 0.01\n[ground]\nlevels = 2\n[scan]\nd_grid = 0.5, 1\n"
        "[dispersion]\nk_points = 9\n[dynamics]\nT = 400\ndt = 4\n[validate]\nM_grid = 5\nd_grid = 1\n"
        "mapping_M = 3\npt_d_grid = 0.25, 1\n");
  const std::string cfg = " --config '" + (dir / "small.cfg").string() + "'";
  for (const char* cmd : {"ground", "polaron", "scan-binding", "dispersion", "dynamics", "bipolaron", "validate"}) {
    const fs::path out = dir / cmd;
    EXPECT_EQ(run(std::string(cmd) + cfg + " --out '" + out.string() + "'"), 0) << cmd;
    EXPECT_TRUE(fs::exists(out / "manifest.json")) << cmd;
  }
  EXPECT_EQ(data_rows(slurp(dir / "dispersion" / "dispersion.csv")), 9);
}

TEST(Cli, ValidateDefaultsPass) {
  const auto dir = scratch("validate");
  EXPECT_EQ(run("validate --out '" + dir.string() + "'"), 0);
  const std::string csv = slurp(dir / "validate.csv");
  EXPECT_GT(data_rows(csv), 10);
  EXPECT_EQ(csv.find(",0\n"), std::string::npos) << csv;
}
