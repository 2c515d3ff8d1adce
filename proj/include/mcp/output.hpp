#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace mcp::cli {

std::string num(double x);  // 17 significant digits
std::string num(long long x);
inline std::string num(int x) { return num(static_cast<long long>(x)); }

struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines after the unit line
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string render_csv(const CsvTable& t);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string kind;  // csv | plot | manifest
  std::string sha256;
  std::size_t bytes = 0;
};

// Collects files written under one output directory.
class OutputSet {
 public:
  explicit OutputSet(std::string dir);
  const std::string& dir() const { return dir_; }
  std::string write_csv(const std::string& name, const CsvTable& t);
  std::string write_text(const std::string& name, const std::string& text, const std::string& kind);
  const std::vector<OutputFile>& files() const { return files_; }
  nlohmann::json inventory() const;

 private:
  std::string dir_;
  std::vector<OutputFile> files_;
};

// Plot script for an external gnuplot run; columns are 1-based.
std::string gnuplot_script(const std::string& csv, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, int xcol, const std::vector<int>& ycols,
                           const std::vector<std::string>& labels, const std::string& style = "lines");

}  // namespace mcp::cli
