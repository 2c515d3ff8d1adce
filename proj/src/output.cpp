#include "mcp/output.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcp::cli {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(long long x) { return std::to_string(x); }

std::string render_csv(const CsvTable& t) {
  std::ostringstream os;
  os << "# units: energies in J (J = 1), times in 1/J, angular frequencies in J, lengths in supercells\n";
  for (const auto& c : t.comments) os << "# " << c << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size()) throw std::logic_error("CSV row width does not match the header");
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

OutputSet::OutputSet(std::string dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::string OutputSet::write_text(const std::string& name, const std::string& text, const std::string& kind) {
  const std::string path = (std::filesystem::path(dir_) / name).string();
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
  }
  files_.push_back({name, kind, sha256_hex(text), text.size()});
  return path;
}

std::string OutputSet::write_csv(const std::string& name, const CsvTable& t) {
  return write_text(name, render_csv(t), "csv");
}

nlohmann::json OutputSet::inventory() const {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& f : files_) a.push_back({{"file", f.name}, {"kind", f.kind}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return a;
}

std::string gnuplot_script(const std::string& csv, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, int xcol, const std::vector<int>& ycols,
                           const std::vector<std::string>& labels, const std::string& style) {
  std::ostringstream os;
  os << "# gnuplot script; run from the output directory: gnuplot " << csv.substr(0, csv.rfind('.')) << ".gp\n";
  os << "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n";
  os << "set terminal pngcairo size 900,600\n";
  os << "set output '" << csv.substr(0, csv.rfind('.')) << ".png'\n";
  os << "set title '" << title << "'\nset xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n";
  os << "plot ";
  for (size_t i = 0; i < ycols.size(); ++i) {
    if (i) os << ", \\\n     ";
    os << "'" << csv << "' using " << xcol << ":" << ycols[i] << " with " << style << " title '"
       << (i < labels.size() ? labels[i] : "") << "'";
  }
  os << "\n";
  return os.str();
}

}  // namespace mcp::cli
