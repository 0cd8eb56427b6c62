#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace bcg {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Result of one CLI command: parameters, payload and embedded checks.
struct RunReport {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json payload = nlohmann::json::object();
  std::vector<Check> checks;
  std::string version = kArtifactVersion;

  void add_check(std::string name, bool passed, double value, double tolerance,
                 std::string detail = {});
  bool all_passed() const;

  nlohmann::json to_json() const;
  /// Inverse of to_json; NaN values stored as null come back as NaN.
  static RunReport from_json(const nlohmann::json& j);
};

bool operator==(const Check& a, const Check& b);
bool operator==(const RunReport& a, const RunReport& b);

/// 17 significant digits (%.17g); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Comma-separated, header row first, '\n' line endings.
void write_csv(const CsvTable& table, std::ostream& out);
std::string to_csv(const CsvTable& table);

/// Writes text to path; throws io_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bcg
