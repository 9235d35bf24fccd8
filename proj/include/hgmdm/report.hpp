#pragma once

// Report persistence: pretty JSON plus an RFC-4180 CSV companion.

#include <string>
#include <vector>

#include "json.hpp"

namespace hgmdm::report {

/// Artifact version string.
const char* version();

/// One CSV field, quoted when it contains a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal form of a double.
std::string number(double v);

/// Writes text to dir/name, creating dir. Returns the written path.
std::string write_file(const std::string& dir, const std::string& name, const std::string& text);

/// JSON text with two-space indentation and a trailing newline.
std::string json_text(const nlohmann::json& j);

}  // namespace hgmdm::report
