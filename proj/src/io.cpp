#include "rmobo/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rmobo/rng.hpp"

namespace rmobo {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c)
      out << format_double(rows(r, c)) << (c + 1 < rows.cols() ? "," : "");
    out << "\n";
  }
}

Matrix read_csv(const std::string& path,
                std::vector<std::string>* header_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_csv: empty file " + path);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) header.push_back(tok);
  }
  if (header_out) *header_out = header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (row.size() != header.size())
      throw std::runtime_error("read_csv: ragged row in " + path);
    rows.push_back(std::move(row));
  }
  Matrix out(rows.size(), header.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < header.size(); ++c) out(r, c) = rows[r][c];
  return out;
}

std::map<std::string, std::string> read_kv_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_kv_config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

std::uint64_t hash_string(const std::string& s) { return fnv1a(s); }

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

}  // namespace rmobo
