#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cs2d {

/// Shortest round-trip decimal representation of `v`.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;  // "# k: v"
  std::vector<std::string> columns;
  std::vector<std::string> units;  // optional, one per column
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);

/// Writes atomically enough for our purposes: the file is written in full
/// and then renamed into place. Creates parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cs2d
