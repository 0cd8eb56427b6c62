#include "bcg/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "bcg/error.hpp"

namespace bcg {

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_from(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

bool same_number(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

void RunReport::add_check(std::string name, bool passed, double value, double tolerance,
                          std::string detail) {
  checks.push_back({std::move(name), passed, value, tolerance, std::move(detail)});
}

bool RunReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name},
                  {"passed", c.passed},
                  {"value", number_or_null(c.value)},
                  {"tolerance", number_or_null(c.tolerance)},
                  {"detail", c.detail}});
  }
  return {{"command", command},
          {"version", version},
          {"parameters", parameters},
          {"payload", payload},
          {"checks", cs},
          {"all_passed", all_passed()}};
}

RunReport RunReport::from_json(const nlohmann::json& j) {
  RunReport r;
  try {
    r.command = j.at("command").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.parameters = j.at("parameters");
    r.payload = j.at("payload");
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                          number_from(c.at("value")), number_from(c.at("tolerance")),
                          c.at("detail").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io_error, std::string("malformed report: ") + e.what());
  }
  return r;
}

bool operator==(const Check& a, const Check& b) {
  return a.name == b.name && a.passed == b.passed && same_number(a.value, b.value) &&
         same_number(a.tolerance, b.tolerance) && a.detail == b.detail;
}

bool operator==(const RunReport& a, const RunReport& b) {
  return a.command == b.command && a.version == b.version && a.parameters == b.parameters &&
         a.payload == b.payload && a.checks == b.checks;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const CsvTable& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_error, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::io_error, "write to '" + path + "' failed");
}

}  // namespace bcg
