#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace occbench {

/// Minimal CSV table: header plus rows of string cells. Fields containing
/// commas, quotes or newlines are quoted on output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index, or -1.
  int column(const std::string& name) const;
  std::string to_string() const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace occbench
