#pragma once

// Deterministic CSV and JSON emission. Numbers are printed with 17
// significant digits so files round-trip and compare byte for byte.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace pfr {

std::string format_number(double v);
std::string format_number(long long v);

struct CsvTable {
  std::string schema;  // written as "# schema: <schema>" on the first line
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string str() const;
};

/// Creates parent directories as needed. Throws std::runtime_error on failure.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Doubles as JSON, mapping non-finite values to strings ("inf", "-inf", "nan").
nlohmann::json json_number(double v);

}  // namespace pfr
