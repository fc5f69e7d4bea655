#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace wavelab::runner {

enum ExitStatus : int { kPass = 0, kAssertionFailure = 1, kConfigError = 2 };

// One CSV artifact; cells are preformatted so output is byte-stable.
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  [[nodiscard]] std::string render() const;
};

// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string fmt(double x);
std::string fmt(std::size_t x);
std::string fmt(int x);
std::string fmt(bool x);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::string config_hash;
  json config;
  json results = json::object();
  json refinement = json::array();  // grid-refinement ladder, one object per level
  std::vector<Check> checks;
  std::vector<CsvTable> tables;
  json error;                        // set on config errors / numerical failures
  int status = kPass;
  double wall_clock = 0.0;

  void check(std::string name, bool pass, std::string detail = {});
  // Row summary used by sweep: scalar entries of `results`.
  [[nodiscard]] json summary() const;

  [[nodiscard]] json to_json(bool include_wall_clock = true) const;
  // Writes report.json and every table under <out>/<command>/<hash>/; returns that directory.
  std::filesystem::path write(const std::filesystem::path& out) const;
};

// JSON value for a double: non-finite values become strings so reports stay valid JSON.
json num(double x);

}  // namespace wavelab::runner
