// CSV / config-file plumbing. Doubles are printed with 17 significant
// digits, so identical records serialize byte-identically.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rmobo/types.hpp"

namespace rmobo {

std::string format_double(double v);  // %.17g

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& rows);

// Reads a CSV written by write_csv; header_out may be null.
Matrix read_csv(const std::string& path,
                std::vector<std::string>* header_out = nullptr);

// Plain-text `key = value` config files; '#' starts a comment line.
std::map<std::string, std::string> read_kv_config(const std::string& path);

std::uint64_t hash_string(const std::string& s);

void ensure_directory(const std::string& path);

}  // namespace rmobo
